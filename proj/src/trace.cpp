#include "adadgs/trace.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "adadgs/format.hpp"

namespace adadgs {

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::iteration_cap:
      return "iteration_cap";
    case StopReason::budget:
      return "budget";
    case StopReason::evaluation_failure:
      return "evaluation_failure";
  }
  return "unknown";
}

void write_trace_csv(std::ostream& out, std::size_t trial, const Trace& trace) {
  out << kTraceCsvHeader << '\n';
  for (const auto& row : trace) {
    out << trial << ',' << row.iteration << ',' << row.evals << ','
        << format_double(row.f_current) << ',' << format_double(row.f_best) << ','
        << format_double(row.sigma) << ',' << format_double(row.step) << '\n';
  }
}

Trace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTraceCsvHeader) {
    throw std::runtime_error("trace csv: unexpected header");
  }
  Trace trace;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      fields.push_back(field);
    }
    if (fields.size() != 7) {
      throw std::runtime_error("trace csv: expected 7 fields in '" + line + "'");
    }
    TraceRow row;
    row.iteration = std::stoull(fields[1]);
    row.evals = std::stoull(fields[2]);
    row.f_current = parse_double(fields[3]);
    row.f_best = parse_double(fields[4]);
    row.sigma = parse_double(fields[5]);
    row.step = parse_double(fields[6]);
    trace.push_back(row);
  }
  return trace;
}

}  // namespace adadgs
