// Command-line front end: run experiments, list benchmark functions and
// presets.

#include <omp.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <iomanip>
#include <iostream>

#include "adadgs/benchmarks.hpp"
#include "adadgs/format.hpp"
#include "adadgs/harness.hpp"

namespace {

constexpr const char* kThreadsVariable = "ADADGS_NUM_THREADS";

void apply_thread_count() {
  if (const char* value = std::getenv(kThreadsVariable)) {
    const int threads = std::atoi(value);
    if (threads < 1) {
      throw std::invalid_argument(std::string(kThreadsVariable) + " must be a positive integer");
    }
    omp_set_num_threads(threads);
  }
}

std::string flag_help(const std::string& key) {
  static const std::map<std::string, std::string> help = {
      {"func", "benchmark function name, or 'subprocess' for an external objective"},
      {"dim", "problem dimension"},
      {"optimizer", "adadgs | es_bpop | nesterov | fd"},
      {"trials", "number of independent trials"},
      {"budget", "evaluation budget per trial"},
      {"seed", "master seed"},
      {"out", "output directory"},
      {"checkpoints", "number of evaluation checkpoints in summary.json"},
      {"parallel-trials", "run trials on the OpenMP worker pool"},
      {"preset", "named hyper-parameter preset (see 'presets')"},
      {"command", "external objective command line (whitespace separated)"},
      {"lower", "external objective: lower bound of the search box"},
      {"upper", "external objective: upper bound of the search box"},
      {"workers", "external objective: number of processes"},
      {"timeout-ms", "external objective: reply timeout"},
      {"gh-order", "Gauss-Hermite points per direction"},
      {"lmax", "longest line-search step (default: search box diagonal)"},
      {"lmin", "shortest line-search step (default: lmin-ratio * lmax)"},
      {"lmin-ratio", "lmin as a fraction of lmax"},
      {"ls-points", "line-search points (default: max(12, 0.05*M*d))"},
      {"contraction", "ratio between consecutive line-search steps"},
      {"sigma0", "initial smoothing radius (default: sigma0-scale * box width)"},
      {"sigma0-scale", "sigma0 as a multiple of the box width"},
      {"gamma", "relative-change threshold for random exploration (0 disables)"},
      {"max-iters", "iteration cap"},
      {"reset-interval", "minimum iterations between radius resets"},
      {"radius-update", "distance | learning_rate"},
      {"initial-frame", "identity | random"},
      {"skip-zero-node", "skip the zero Gauss-Hermite node for odd orders"},
      {"execution", "serial | parallel batch evaluation"},
      {"lr", "baseline learning rate"},
      {"sigma-or-h", "baseline smoothing radius (es_bpop) or difference step"},
      {"population", "es_bpop population size"},
      {"antithetic", "es_bpop antithetic sampling"},
  };
  auto it = help.find(key);
  return it == help.end() ? key : it->second;
}

int run_command(const adadgs::Settings& cli, const std::string& config_path) {
  adadgs::Settings file;
  if (!config_path.empty()) {
    file = adadgs::read_config_file(config_path);
  }
  adadgs::Settings preset;
  const auto preset_name = cli.count("preset") ? cli.at("preset")
                           : file.count("preset") ? file.at("preset")
                                                  : std::string();
  if (!preset_name.empty()) {
    preset = adadgs::preset(preset_name);
  }
  const adadgs::Settings merged = adadgs::merge_settings({&preset, &file, &cli});
  const adadgs::ExperimentSpec spec = adadgs::spec_from_settings(merged);

  const adadgs::ExperimentSummary summary = adadgs::run_experiment(spec);
  std::cout << "wrote " << spec.run_dir().string() << "\n"
            << "final f_best: mean " << adadgs::format_double(summary.final_mean) << ", std "
            << adadgs::format_double(summary.final_std) << ", median "
            << adadgs::format_double(summary.final_median) << "\n";
  if (summary.failed_trials > 0) {
    std::cerr << "error: " << summary.failed_trials
              << " trial(s) stopped on an evaluation failure; see manifest.json\n";
    return 2;
  }
  return 0;
}

void list_command() {
  std::cout << std::left << std::setw(18) << "name" << std::setw(22) << "domain"
            << "optimum\n";
  for (const auto& info : adadgs::benchmark_registry()) {
    const std::string domain = "[" + adadgs::format_double(info.domain.lower) + ", " +
                               adadgs::format_double(info.domain.upper) + "]";
    std::cout << std::setw(18) << info.name << std::setw(22) << domain << info.optimum_text
              << "\n";
  }
}

void presets_command() {
  for (const auto& name : adadgs::preset_names()) {
    std::cout << name << ":";
    for (const auto& [k, v] : adadgs::preset(name)) {
      std::cout << " --" << k << " " << v;
    }
    std::cout << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AdaDGS derivative-free optimization benchmark harness"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a multi-trial experiment");
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  for (const auto& key : adadgs::settings_keys()) {
    options[key] = run->add_option("--" + key, values[key], flag_help(key));
  }
  std::string config_path;
  run->add_option("--config", config_path, "INI file with settings; command-line flags win");

  auto* list = app.add_subcommand("list", "list benchmark functions");
  auto* presets = app.add_subcommand("presets", "list hyper-parameter presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    apply_thread_count();
    if (*list) {
      list_command();
      return 0;
    }
    if (*presets) {
      presets_command();
      return 0;
    }
    adadgs::Settings cli;
    for (const auto& [key, option] : options) {
      if (option->count() > 0) {
        cli[key] = values[key];
      }
    }
    return run_command(cli, config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
