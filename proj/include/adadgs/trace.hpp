#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "adadgs/objective.hpp"

namespace adadgs {

/// One row per completed iteration; row 0 is the initial point.
struct TraceRow {
  std::size_t iteration = 0;
  std::size_t evals = 0;  ///< cumulative evaluations after this iteration
  double f_current = 0.0;
  double f_best = 0.0;
  double sigma = 0.0;
  double step = 0.0;
};

using Trace = std::vector<TraceRow>;

enum class StopReason { iteration_cap, budget, evaluation_failure };

std::string to_string(StopReason reason);

struct OptimizationResult {
  Vector x_best;
  double f_best = 0.0;
  Trace trace;
  StopReason stop = StopReason::budget;
  std::string error;  ///< set when stop == evaluation_failure
};

inline constexpr const char* kTraceCsvHeader = "trial,iteration,evals,f_current,f_best,sigma,step";

/// Writes the CSV header followed by one line per row, using shortest
/// round-trip decimals.
void write_trace_csv(std::ostream& out, std::size_t trial, const Trace& trace);

/// Parses a file written by write_trace_csv. Throws std::runtime_error on a
/// malformed header or row.
Trace read_trace_csv(std::istream& in);

}  // namespace adadgs
