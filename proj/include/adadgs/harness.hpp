#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "adadgs/baselines.hpp"
#include "adadgs/optimizer.hpp"

namespace adadgs {

/// Flat key/value settings. Keys are the long CLI flag names without the
/// leading dashes ("func", "dim", "gh-order", ...).
using Settings = std::map<std::string, std::string>;

/// Every recognised settings key, in display order.
const std::vector<std::string>& settings_keys();

/// Reads an INI-style file ("[section]" headers, "key = value" lines).
/// Sections only group keys; names must be unique across sections.
/// Throws std::runtime_error on parse errors or unknown keys.
Settings read_config_file(const std::filesystem::path& path);

/// Later layers win. Typical order: preset, config file, command line.
Settings merge_settings(std::initializer_list<const Settings*> layers);

const std::vector<std::string>& preset_names();

/// Hyper-parameter fragment for a named preset. Throws
/// std::invalid_argument for unknown names.
Settings preset(std::string_view name);

enum class OptimizerKind { adadgs, es_bpop, nesterov, fd };

OptimizerKind parse_optimizer_kind(std::string_view name);
std::string_view to_string(OptimizerKind kind);

/// Name of the external-process pseudo function.
inline constexpr std::string_view kSubprocessFunction = "subprocess";

struct ExperimentSpec {
  std::string function;
  std::size_t dim = 0;
  OptimizerKind optimizer = OptimizerKind::adadgs;
  std::size_t trials = 20;
  std::size_t budget = 0;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = "results";
  std::size_t checkpoints = 100;
  bool parallel_trials = true;

  AdaDgsConfig adadgs;
  BaselineConfig baseline;

  // function == "subprocess" only
  std::vector<std::string> command;
  Interval command_bounds{-1.0, 1.0};
  std::size_t command_workers = 1;
  std::size_t command_timeout_ms = 30000;

  /// The fully resolved settings, recorded in the manifest.
  Settings settings;

  /// <out>/<func>_<dim>_<optimizer>
  std::filesystem::path run_dir() const;
};

/// Validates and converts settings; missing keys take defaults, except
/// func, dim and budget which are required.
ExperimentSpec spec_from_settings(const Settings& settings);

/// Seed of trial k, derived from the master seed.
std::uint64_t trial_seed(std::uint64_t master, std::size_t trial);

struct TrialOutcome {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  OptimizationResult result;
  std::size_t objective_evaluations = 0;  ///< counter of the objective itself
};

/// Runs one trial in memory: random rotation and optimum, random start in
/// the search box, then the configured optimizer.
TrialOutcome run_trial(const ExperimentSpec& spec, std::size_t trial);

struct CheckpointStats {
  std::size_t evals = 0;
  double mean = 0.0;
  double std = 0.0;  ///< population standard deviation across trials
  double median = 0.0;
};

struct ExperimentSummary {
  std::vector<CheckpointStats> checkpoints;
  std::vector<double> final_best;  ///< per trial
  double final_mean = 0.0;
  double final_std = 0.0;
  double final_median = 0.0;
  std::size_t failed_trials = 0;
  bool complete = false;
};

/// Checkpoint grid ceil(budget * k / count), k = 1..count.
std::vector<std::size_t> checkpoint_grid(std::size_t budget, std::size_t count);

/// Best-so-far of a trace at an evaluation count (last row with evals <= at).
double best_at(const Trace& trace, std::size_t at);

/// Cross-trial statistics; empty traces are skipped.
ExperimentSummary aggregate(const std::vector<Trace>& traces, std::size_t budget,
                            std::size_t checkpoints);

/// Runs every trial, writes trial_<k>.csv, summary.json and manifest.json
/// under spec.run_dir(). Files are written to a temporary name and renamed.
/// On an I/O failure the manifest is left marked incomplete and the error
/// is rethrown.
ExperimentSummary run_experiment(const ExperimentSpec& spec);

/// Median of a non-empty sample.
double median(std::vector<double> values);

}  // namespace adadgs
