#include "adadgs/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <exception>
#include <fstream>
#include <json.hpp>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "adadgs/benchmarks.hpp"
#include "adadgs/format.hpp"
#include "adadgs/subprocess.hpp"

namespace adadgs {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const Settings& default_settings() {
  static const Settings defaults = {
      {"optimizer", "adadgs"},
      {"trials", "20"},
      {"seed", "0"},
      {"out", "results"},
      {"checkpoints", "100"},
      {"parallel-trials", "true"},
      {"lower", "-1"},
      {"upper", "1"},
      {"workers", "1"},
      {"timeout-ms", "30000"},
      {"gh-order", "5"},
      {"lmin-ratio", "0.005"},
      {"sigma0-scale", "1"},
      {"gamma", "0.001"},
      {"reset-interval", "10"},
      {"radius-update", "distance"},
      {"initial-frame", "identity"},
      {"skip-zero-node", "true"},
      {"execution", "parallel"},
      {"antithetic", "true"},
  };
  return defaults;
}

std::string require_key(const Settings& s, const std::string& key) {
  auto it = s.find(key);
  if (it == s.end() || it->second.empty()) {
    throw std::invalid_argument("missing required setting '" + key + "'");
  }
  return it->second;
}

std::optional<std::string> lookup(const Settings& s, const std::string& key) {
  auto it = s.find(key);
  if (it == s.end() || it->second.empty()) {
    return std::nullopt;
  }
  return it->second;
}

std::uint64_t to_u64(const std::string& key, const std::string& text) {
  std::size_t consumed = 0;
  unsigned long long value = 0;
  try {
    if (!text.empty() && text.front() == '-') throw std::invalid_argument("negative");
    value = std::stoull(text, &consumed, 10);
  } catch (const std::exception&) {
    consumed = 0;
  }
  if (consumed != text.size() || text.empty()) {
    throw std::invalid_argument("setting '" + key + "': expected a non-negative integer, got '" +
                                text + "'");
  }
  return value;
}

std::size_t to_size(const std::string& key, const std::string& text) {
  return static_cast<std::size_t>(to_u64(key, text));
}

double to_double(const std::string& key, const std::string& text) {
  try {
    return parse_double(text);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("setting '" + key + "': expected a number, got '" + text + "'");
  }
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw std::invalid_argument("setting '" + key + "': expected true/false, got '" + text + "'");
}

std::vector<std::string> split_words(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> words;
  for (std::string w; in >> w;) {
    words.push_back(w);
  }
  return words;
}

void write_atomically(const fs::path& path, const std::string& contents) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    }
    out << contents;
    out.flush();
    if (!out) {
      throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
  }
  fs::rename(tmp, path);
}

Objective make_objective(const ExperimentSpec& spec, std::uint64_t seed) {
  if (spec.function == kSubprocessFunction) {
    SubprocessOptions options;
    options.argv = spec.command;
    options.timeout = std::chrono::milliseconds(spec.command_timeout_ms);
    options.workers = spec.command_workers;
    return subprocess_objective(options, spec.dim,
                                std::vector<Interval>(spec.dim, spec.command_bounds));
  }
  return make_benchmark(spec.function, spec.dim, derive_seed(seed, 0)).objective();
}

std::vector<Interval> spec_bounds(const ExperimentSpec& spec) {
  if (spec.function == kSubprocessFunction) {
    return std::vector<Interval>(spec.dim, spec.command_bounds);
  }
  return std::vector<Interval>(spec.dim, benchmark_info(parse_benchmark(spec.function)).domain);
}

double population_std(const std::vector<double>& values, double mean) {
  double sum = 0.0;
  for (double v : values) {
    sum += (v - mean) * (v - mean);
  }
  return std::sqrt(sum / static_cast<double>(values.size()));
}

double mean_of(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) {
    sum += v;
  }
  return sum / static_cast<double>(values.size());
}

json summary_json(const ExperimentSpec& spec, const ExperimentSummary& summary) {
  json checkpoints = json::array();
  for (const auto& c : summary.checkpoints) {
    checkpoints.push_back({{"evals", c.evals}, {"mean", c.mean}, {"std", c.std}, {"median", c.median}});
  }
  return json{
      {"function", spec.function},
      {"dim", spec.dim},
      {"optimizer", std::string(to_string(spec.optimizer))},
      {"trials", spec.trials},
      {"budget", spec.budget},
      {"checkpoints", checkpoints},
      {"final",
       {{"mean", summary.final_mean},
        {"std", summary.final_std},
        {"median", summary.final_median},
        {"f_best", summary.final_best}}},
      {"failed_trials", summary.failed_trials},
  };
}

json resolved_json(const ExperimentSpec& spec) {
  if (spec.optimizer != OptimizerKind::adadgs) {
    return json{{"learning_rate", spec.baseline.learning_rate},
                {"sigma_or_h", spec.baseline.sigma_or_h},
                {"evals_per_iteration", baseline_evals_per_iteration(spec.baseline, spec.dim)}};
  }
  const Objective probe("probe", spec_bounds(spec), [](const VectorRef&) { return 0.0; });
  const ResolvedAdaDgs r = resolve(spec.adadgs, probe);
  return json{{"gh_order", r.rule.order},
              {"l_max", r.grid.l_max},
              {"l_min", r.grid.l_min()},
              {"contraction", r.grid.rho},
              {"ls_points", r.grid.points},
              {"sigma0", r.sigma0},
              {"gamma", r.gamma},
              {"evals_per_iteration", evals_per_iteration(r, spec.dim)}};
}

}  // namespace

const std::vector<std::string>& settings_keys() {
  static const std::vector<std::string> keys = {
      // run
      "func", "dim", "optimizer", "trials", "budget", "seed", "out", "checkpoints",
      "parallel-trials", "preset",
      // external objective
      "command", "lower", "upper", "workers", "timeout-ms",
      // adadgs
      "gh-order", "lmax", "lmin", "lmin-ratio", "ls-points", "contraction", "sigma0",
      "sigma0-scale", "gamma", "max-iters", "reset-interval", "radius-update", "initial-frame",
      "skip-zero-node", "execution",
      // baselines
      "lr", "sigma-or-h", "population", "antithetic"};
  return keys;
}

Settings read_config_file(const fs::path& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path.string(), tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw std::runtime_error("config file: " + std::string(e.what()));
  }
  const std::set<std::string> known(settings_keys().begin(), settings_keys().end());
  Settings out;
  auto take = [&](const std::string& key, const std::string& value) {
    if (!known.count(key)) {
      throw std::runtime_error("config file '" + path.string() + "': unknown key '" + key + "'");
    }
    if (out.count(key)) {
      throw std::runtime_error("config file '" + path.string() + "': duplicate key '" + key + "'");
    }
    out[key] = value;
  };
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      take(name, node.data());
    } else {
      for (const auto& [key, leaf] : node) {
        take(key, leaf.data());
      }
    }
  }
  return out;
}

Settings merge_settings(std::initializer_list<const Settings*> layers) {
  Settings out;
  for (const Settings* layer : layers) {
    if (layer == nullptr) continue;
    for (const auto& [k, v] : *layer) {
      out[k] = v;
    }
  }
  return out;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"paper-1000d", "paper-scaling"};
  return names;
}

Settings preset(std::string_view name) {
  // Benchmark protocol hyper-parameters; the budget is left to the user.
  Settings s = {
      {"optimizer", "adadgs"}, {"trials", "20"},       {"gh-order", "5"},
      {"gamma", "0"},          {"sigma0-scale", "5"},  {"contraction", "0.9"},
      {"ls-points", "200"},    {"initial-frame", "identity"},
  };
  if (name == "paper-1000d") {
    s["dim"] = "1000";
    return s;
  }
  if (name == "paper-scaling") {
    s["dim"] = "2000";
    return s;
  }
  throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

OptimizerKind parse_optimizer_kind(std::string_view name) {
  if (name == "adadgs") return OptimizerKind::adadgs;
  if (name == "es_bpop") return OptimizerKind::es_bpop;
  if (name == "nesterov") return OptimizerKind::nesterov;
  if (name == "fd") return OptimizerKind::fd;
  throw std::invalid_argument("unknown optimizer '" + std::string(name) + "'");
}

std::string_view to_string(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::adadgs:
      return "adadgs";
    case OptimizerKind::es_bpop:
      return "es_bpop";
    case OptimizerKind::nesterov:
      return "nesterov";
    case OptimizerKind::fd:
      return "fd";
  }
  return "unknown";
}

fs::path ExperimentSpec::run_dir() const {
  return out_dir / (function + "_" + std::to_string(dim) + "_" + std::string(to_string(optimizer)));
}

ExperimentSpec spec_from_settings(const Settings& input) {
  const std::set<std::string> known(settings_keys().begin(), settings_keys().end());
  for (const auto& [k, v] : input) {
    if (!known.count(k)) {
      throw std::invalid_argument("unknown setting '" + k + "'");
    }
  }
  const Settings s = merge_settings({&default_settings(), &input});

  ExperimentSpec spec;
  spec.settings = s;
  spec.function = require_key(s, "func");
  spec.dim = to_size("dim", require_key(s, "dim"));
  spec.budget = to_size("budget", require_key(s, "budget"));
  spec.optimizer = parse_optimizer_kind(s.at("optimizer"));
  spec.trials = to_size("trials", s.at("trials"));
  spec.seed = to_u64("seed", s.at("seed"));
  spec.out_dir = s.at("out");
  spec.checkpoints = to_size("checkpoints", s.at("checkpoints"));
  spec.parallel_trials = to_bool("parallel-trials", s.at("parallel-trials"));

  if (spec.trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (spec.budget < 1) throw std::invalid_argument("budget must be at least 1");
  if (spec.checkpoints < 1) throw std::invalid_argument("checkpoints must be at least 1");

  if (spec.function == kSubprocessFunction) {
    spec.command = split_words(require_key(s, "command"));
    spec.command_bounds = {to_double("lower", s.at("lower")), to_double("upper", s.at("upper"))};
    if (!(spec.command_bounds.lower < spec.command_bounds.upper)) {
      throw std::invalid_argument("lower must be below upper");
    }
    spec.command_workers = std::max<std::size_t>(1, to_size("workers", s.at("workers")));
    spec.command_timeout_ms = to_size("timeout-ms", s.at("timeout-ms"));
    if (spec.dim < 1) throw std::invalid_argument("dim must be at least 1");
  } else {
    parse_benchmark(spec.function);
    if (spec.dim < 2) throw std::invalid_argument("dim must be at least 2");
  }

  const Execution execution = [&] {
    const std::string& e = s.at("execution");
    if (e == "parallel") return Execution::parallel;
    if (e == "serial") return Execution::serial;
    throw std::invalid_argument("execution must be serial or parallel");
  }();

  AdaDgsConfig& a = spec.adadgs;
  a.gh_order = static_cast<int>(to_size("gh-order", s.at("gh-order")));
  if (auto v = lookup(s, "lmax")) a.l_max = to_double("lmax", *v);
  if (auto v = lookup(s, "lmin")) a.l_min = to_double("lmin", *v);
  a.l_min_ratio = to_double("lmin-ratio", s.at("lmin-ratio"));
  if (auto v = lookup(s, "ls-points")) a.ls_points = to_size("ls-points", *v);
  if (auto v = lookup(s, "contraction")) a.contraction = to_double("contraction", *v);
  if (auto v = lookup(s, "sigma0")) a.sigma0 = to_double("sigma0", *v);
  a.sigma0_scale = to_double("sigma0-scale", s.at("sigma0-scale"));
  a.gamma = to_double("gamma", s.at("gamma"));
  if (auto v = lookup(s, "max-iters")) a.max_iterations = to_size("max-iters", *v);
  a.reset_interval = to_size("reset-interval", s.at("reset-interval"));
  const std::string& radius = s.at("radius-update");
  if (radius == "distance") {
    a.radius_update = RadiusUpdate::distance;
  } else if (radius == "learning_rate") {
    a.radius_update = RadiusUpdate::learning_rate;
  } else {
    throw std::invalid_argument("radius-update must be distance or learning_rate");
  }
  const std::string& frame = s.at("initial-frame");
  if (frame == "identity") {
    a.initial_frame = InitialFrame::identity;
  } else if (frame == "random") {
    a.initial_frame = InitialFrame::random;
  } else {
    throw std::invalid_argument("initial-frame must be identity or random");
  }
  a.skip_zero_node = to_bool("skip-zero-node", s.at("skip-zero-node"));
  a.budget = spec.budget;
  a.execution = execution;

  if (spec.optimizer != OptimizerKind::adadgs) {
    const auto method = parse_baseline_method(to_string(spec.optimizer));
    BaselineConfig& b = spec.baseline;
    b = BaselineConfig::defaults(method);
    if (auto v = lookup(s, "lr")) b.learning_rate = to_double("lr", *v);
    if (auto v = lookup(s, "sigma-or-h")) b.sigma_or_h = to_double("sigma-or-h", *v);
    if (auto v = lookup(s, "population")) b.population = to_size("population", *v);
    b.antithetic = to_bool("antithetic", s.at("antithetic"));
    if (auto v = lookup(s, "max-iters")) b.max_iterations = to_size("max-iters", *v);
    b.budget = spec.budget;
    b.execution = execution;
  }

  // Surface configuration errors before any trial starts.
  (void)resolved_json(spec);
  return spec;
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t trial) {
  return derive_seed(master, 1000 + trial);
}

TrialOutcome run_trial(const ExperimentSpec& spec, std::size_t trial) {
  TrialOutcome outcome;
  outcome.trial = trial;
  outcome.seed = trial_seed(spec.seed, trial);
  const Objective objective = make_objective(spec, outcome.seed);

  Rng start_rng(derive_seed(outcome.seed, 1));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector x0(static_cast<Eigen::Index>(spec.dim));
  for (Eigen::Index i = 0; i < x0.size(); ++i) {
    const Interval& b = objective.bounds()[static_cast<std::size_t>(i)];
    x0[i] = b.lower + b.width() * unit(start_rng);
  }

  const std::uint64_t optimizer_seed = derive_seed(outcome.seed, 2);
  if (spec.optimizer == OptimizerKind::adadgs) {
    outcome.result = adadgs_minimize(objective, x0, spec.adadgs, optimizer_seed);
  } else {
    outcome.result = baseline_minimize(objective, x0, spec.baseline, optimizer_seed);
  }
  outcome.objective_evaluations = objective.evaluations();
  return outcome;
}

std::vector<std::size_t> checkpoint_grid(std::size_t budget, std::size_t count) {
  std::vector<std::size_t> grid;
  grid.reserve(count);
  for (std::size_t k = 1; k <= count; ++k) {
    // ceil(budget * k / count) without overflowing budget * k
    const std::size_t whole = budget / count;
    const std::size_t rest = budget % count;
    grid.push_back(whole * k + (rest * k + count - 1) / count);
  }
  return grid;
}

double best_at(const Trace& trace, std::size_t at) {
  double best = std::numeric_limits<double>::quiet_NaN();
  for (const auto& row : trace) {
    if (row.evals > at) break;
    best = row.f_best;
  }
  return best;
}

double median(std::vector<double> values) {
  if (values.empty()) {
    throw std::invalid_argument("median of an empty sample");
  }
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

ExperimentSummary aggregate(const std::vector<Trace>& traces, std::size_t budget,
                            std::size_t checkpoints) {
  ExperimentSummary summary;
  std::vector<const Trace*> usable;
  for (const auto& t : traces) {
    if (!t.empty()) usable.push_back(&t);
  }
  summary.failed_trials = traces.size() - usable.size();
  if (usable.empty()) {
    return summary;
  }
  for (std::size_t at : checkpoint_grid(budget, checkpoints)) {
    std::vector<double> values;
    for (const Trace* t : usable) {
      values.push_back(best_at(*t, at));
    }
    CheckpointStats c;
    c.evals = at;
    c.mean = mean_of(values);
    c.std = population_std(values, c.mean);
    c.median = median(values);
    summary.checkpoints.push_back(c);
  }
  for (const Trace* t : usable) {
    summary.final_best.push_back(t->back().f_best);
  }
  summary.final_mean = mean_of(summary.final_best);
  summary.final_std = population_std(summary.final_best, summary.final_mean);
  summary.final_median = median(summary.final_best);
  return summary;
}

ExperimentSummary run_experiment(const ExperimentSpec& spec) {
  const fs::path dir = spec.run_dir();
  fs::create_directories(dir);

  std::vector<std::uint64_t> seeds(spec.trials);
  for (std::size_t k = 0; k < spec.trials; ++k) {
    seeds[k] = trial_seed(spec.seed, k);
  }
  json manifest = {
      {"settings", spec.settings},
      {"resolved", resolved_json(spec)},
      {"master_seed", spec.seed},
      {"trial_seeds", seeds},
      {"complete", false},
  };
  write_atomically(dir / "manifest.json", manifest.dump(2) + "\n");

  std::vector<Trace> traces(spec.trials);
  json trial_status = json::array();
  std::vector<json> statuses(spec.trials);
  std::exception_ptr io_failure;
  const auto trials = static_cast<std::ptrdiff_t>(spec.trials);

#pragma omp parallel for schedule(dynamic, 1) if (spec.parallel_trials && spec.trials > 1)
  for (std::ptrdiff_t k = 0; k < trials; ++k) {
    const auto trial = static_cast<std::size_t>(k);
    try {
      TrialOutcome outcome = run_trial(spec, trial);
      std::ostringstream csv;
      write_trace_csv(csv, trial, outcome.result.trace);
      write_atomically(dir / ("trial_" + std::to_string(trial) + ".csv"), csv.str());
      statuses[trial] = {{"trial", trial},
                         {"seed", outcome.seed},
                         {"stop", to_string(outcome.result.stop)},
                         {"error", outcome.result.error},
                         {"evaluations", outcome.objective_evaluations}};
      traces[trial] = std::move(outcome.result.trace);
    } catch (...) {
#pragma omp critical(adadgs_experiment_failure)
      {
        if (!io_failure) io_failure = std::current_exception();
      }
    }
  }

  for (auto& s : statuses) {
    trial_status.push_back(s);
  }
  manifest["trial_status"] = trial_status;
  if (io_failure) {
    try {
      std::rethrow_exception(io_failure);
    } catch (const std::exception& e) {
      manifest["error"] = e.what();
    } catch (...) {
      manifest["error"] = "unknown error";
    }
    try {
      write_atomically(dir / "manifest.json", manifest.dump(2) + "\n");
    } catch (...) {
    }
    std::rethrow_exception(io_failure);
  }

  ExperimentSummary summary = aggregate(traces, spec.budget, spec.checkpoints);
  summary.failed_trials = static_cast<std::size_t>(
      std::count_if(statuses.begin(), statuses.end(), [](const json& s) {
        return s.at("stop") == to_string(StopReason::evaluation_failure);
      }));
  write_atomically(dir / "summary.json", summary_json(spec, summary).dump(2) + "\n");
  summary.complete = true;
  manifest["complete"] = true;
  write_atomically(dir / "manifest.json", manifest.dump(2) + "\n");
  return summary;
}

}  // namespace adadgs
