#include <doctest.h>
#include <omp.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "adadgs/benchmarks.hpp"
#include "adadgs/harness.hpp"
#include "support.hpp"

using namespace adadgs;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("adadgs_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

Settings small_run(const fs::path& out, std::string func = "rastrigin",
                   std::string optimizer = "adadgs") {
  return {{"func", func},     {"dim", "6"},      {"budget", "3000"},
          {"trials", "4"},    {"seed", "17"},    {"out", out.string()},
          {"optimizer", optimizer}, {"checkpoints", "10"}};
}

std::vector<Trace> read_traces(const fs::path& dir, std::size_t trials) {
  std::vector<Trace> traces;
  for (std::size_t k = 0; k < trials; ++k) {
    std::ifstream in(dir / ("trial_" + std::to_string(k) + ".csv"));
    traces.push_back(read_trace_csv(in));
  }
  return traces;
}

}  // namespace

TEST_CASE("named presets carry the benchmark hyper-parameters") {
  REQUIRE(preset_names() == std::vector<std::string>{"paper-1000d", "paper-scaling"});
  const Settings p = preset("paper-1000d");
  CHECK(p.at("gh-order") == "5");
  CHECK(p.at("gamma") == "0");
  CHECK(p.at("sigma0-scale") == "5");
  CHECK(p.at("contraction") == "0.9");
  CHECK(p.at("ls-points") == "200");
  CHECK(p.at("dim") == "1000");
  CHECK(p.at("trials") == "20");
  CHECK_THROWS_AS(preset("huge-9000d"), std::invalid_argument);

  Settings run = {{"func", "ackley"}, {"budget", "100"}};
  const ExperimentSpec spec = spec_from_settings(merge_settings({&p, &run}));
  CHECK(spec.dim == 1000);
  CHECK(spec.adadgs.gh_order == 5);
  CHECK(spec.adadgs.gamma == 0.0);
  CHECK(spec.adadgs.sigma0_scale == 5.0);
  CHECK(spec.adadgs.contraction == 0.9);
  CHECK(spec.adadgs.ls_points == std::size_t{200});
  CHECK(spec.trials == 20);
}

TEST_CASE("a larger dimension keeps the preset hyper-parameters") {
  const Settings p = preset("paper-1000d");
  const Settings cli = {{"func", "ackley"}, {"budget", "100"}, {"dim", "2000"}};
  const ExperimentSpec scaled = spec_from_settings(merge_settings({&p, &cli}));
  const Settings cli_base = {{"func", "ackley"}, {"budget", "100"}};
  const ExperimentSpec base = spec_from_settings(merge_settings({&p, &cli_base}));
  CHECK(scaled.dim == 2000);
  CHECK(scaled.adadgs.gh_order == base.adadgs.gh_order);
  CHECK(scaled.adadgs.contraction == base.adadgs.contraction);
  CHECK(scaled.adadgs.ls_points == base.adadgs.ls_points);
  CHECK(scaled.adadgs.sigma0_scale == base.adadgs.sigma0_scale);
  CHECK(scaled.adadgs.gamma == base.adadgs.gamma);

  const Settings s = preset("paper-scaling");
  for (const auto& [k, v] : p) {
    if (k != "dim") CHECK(s.at(k) == v);
  }
}

TEST_CASE("settings require func, dim and budget and reject bad values") {
  CHECK_THROWS_AS(spec_from_settings({{"dim", "3"}, {"budget", "10"}}), std::invalid_argument);
  CHECK_THROWS_AS(spec_from_settings({{"func", "ackley"}, {"budget", "10"}}), std::invalid_argument);
  CHECK_THROWS_AS(spec_from_settings({{"func", "ackley"}, {"dim", "3"}}), std::invalid_argument);
  const Settings ok = {{"func", "ackley"}, {"dim", "3"}, {"budget", "10"}};
  CHECK_NOTHROW(spec_from_settings(ok));
  auto with = [&](std::string k, std::string v) {
    Settings s = ok;
    s[k] = v;
    return s;
  };
  CHECK_THROWS_AS(spec_from_settings(with("func", "griewank")), std::invalid_argument);
  CHECK_THROWS_AS(spec_from_settings(with("dim", "1")), std::invalid_argument);
  CHECK_THROWS_AS(spec_from_settings(with("dim", "-3")), std::invalid_argument);
  CHECK_THROWS_AS(spec_from_settings(with("trials", "0")), std::invalid_argument);
  CHECK_THROWS_AS(spec_from_settings(with("optimizer", "cma")), std::invalid_argument);
  CHECK_THROWS_AS(spec_from_settings(with("gamma", "fast")), std::invalid_argument);
  CHECK_THROWS_AS(spec_from_settings(with("lmin", "1e9")), std::invalid_argument);
  CHECK_THROWS_AS(spec_from_settings(with("radius-update", "lambda")), std::invalid_argument);
  CHECK_THROWS_AS(spec_from_settings(with("colour", "red")), std::invalid_argument);
  CHECK_THROWS_AS(spec_from_settings(with("func", "subprocess")), std::invalid_argument);
}

TEST_CASE("INI files are read with sections as grouping only") {
  TempDir tmp;
  const fs::path file = tmp.path() / "exp.ini";
  std::ofstream(file) << "; experiment\n[run]\nfunc = wavy\ndim = 12\n\n[adadgs]\ngamma = 0.5\n"
                         "ls-points = 30\n";
  const Settings s = read_config_file(file);
  CHECK(s.at("func") == "wavy");
  CHECK(s.at("dim") == "12");
  CHECK(s.at("gamma") == "0.5");
  CHECK(s.at("ls-points") == "30");

  std::ofstream(tmp.path() / "unknown.ini") << "[run]\ncolour = red\n";
  CHECK_THROWS_AS(read_config_file(tmp.path() / "unknown.ini"), std::runtime_error);
  std::ofstream(tmp.path() / "dup.ini") << "[a]\ndim = 3\n[b]\ndim = 4\n";
  CHECK_THROWS_AS(read_config_file(tmp.path() / "dup.ini"), std::runtime_error);
  std::ofstream(tmp.path() / "broken.ini") << "[run\nfunc = wavy\n";
  CHECK_THROWS_AS(read_config_file(tmp.path() / "broken.ini"), std::runtime_error);
  CHECK_THROWS_AS(read_config_file(tmp.path() / "missing.ini"), std::runtime_error);
}

TEST_CASE("later settings layers win") {
  const Settings p = {{"gamma", "0"}, {"dim", "1000"}, {"trials", "20"}};
  const Settings file = {{"gamma", "0.2"}, {"dim", "50"}};
  const Settings cli = {{"dim", "7"}};
  const Settings m = merge_settings({&p, &file, &cli});
  CHECK(m.at("gamma") == "0.2");
  CHECK(m.at("dim") == "7");
  CHECK(m.at("trials") == "20");
}

TEST_CASE("trial seeds are distinct and reproducible") {
  CHECK(trial_seed(5, 0) == trial_seed(5, 0));
  CHECK(trial_seed(5, 0) != trial_seed(5, 1));
  CHECK(trial_seed(5, 0) != trial_seed(6, 0));
}

TEST_CASE("checkpoint grid and best_at") {
  CHECK(checkpoint_grid(1000, 4) == std::vector<std::size_t>{250, 500, 750, 1000});
  CHECK(checkpoint_grid(10, 3) == std::vector<std::size_t>{4, 7, 10});
  CHECK(checkpoint_grid(2, 4) == std::vector<std::size_t>{1, 1, 2, 2});
  const std::size_t huge = std::numeric_limits<std::size_t>::max();
  CHECK(checkpoint_grid(huge, 7).back() == huge);

  const Trace t = {{0, 1, 5.0, 5.0, 1.0, 0.0}, {1, 11, 4.0, 4.0, 1.0, 0.1}, {2, 21, 3.0, 3.0, 1.0, 0.1}};
  CHECK(std::isnan(best_at(t, 0)));
  CHECK(best_at(t, 1) == 5.0);
  CHECK(best_at(t, 20) == 4.0);
  CHECK(best_at(t, 1000) == 3.0);
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
}

TEST_CASE("trace CSV format is frozen") {
  CHECK(std::string(kTraceCsvHeader) == "trial,iteration,evals,f_current,f_best,sigma,step");
  const Trace t = {{0, 1, 0.1, 0.1, 2.0, 0.0}, {1, 9, 1.0 / 3.0, 1e-300, 0.5, 3.0}};
  std::ostringstream out;
  write_trace_csv(out, 3, t);
  CHECK(out.str() ==
        "trial,iteration,evals,f_current,f_best,sigma,step\n"
        "3,0,1,0.1,0.1,2,0\n"
        "3,1,9,0.3333333333333333,1e-300,0.5,3\n");
  std::istringstream in(out.str());
  const Trace back = read_trace_csv(in);
  REQUIRE(back.size() == 2);
  CHECK(back[1].f_current == 1.0 / 3.0);
  CHECK(back[1].f_best == 1e-300);
}

TEST_CASE("budget of one iteration minus the initial evaluation yields one data row") {
  TempDir tmp;
  Settings s = small_run(tmp.path());
  s["trials"] = "1";
  s["dim"] = "4";
  // 4 directions * 4 non-zero nodes + 12 line-search points
  s["budget"] = std::to_string(16 + 12);
  ExperimentSpec spec = spec_from_settings(s);
  run_experiment(spec);
  std::string csv = slurp(spec.run_dir() / "trial_0.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);

  s["budget"] = std::to_string(1 + 16 + 12);
  spec = spec_from_settings(s);
  run_experiment(spec);
  csv = slurp(spec.run_dir() / "trial_0.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("output layout, manifest and budget accounting") {
  TempDir tmp;
  for (const char* optimizer : {"adadgs", "es_bpop", "nesterov", "fd"}) {
    const ExperimentSpec spec = spec_from_settings(small_run(tmp.path(), "ackley", optimizer));
    const ExperimentSummary summary = run_experiment(spec);
    const fs::path dir = tmp.path() / (std::string("ackley_6_") + optimizer);
    CHECK(spec.run_dir() == dir);
    for (int k = 0; k < 4; ++k) CHECK(fs::exists(dir / ("trial_" + std::to_string(k) + ".csv")));
    CHECK(fs::exists(dir / "summary.json"));
    CHECK_FALSE(fs::exists(dir / "trial_0.csv.tmp"));
    CHECK(summary.complete);

    const json manifest = read_json(dir / "manifest.json");
    CHECK(manifest.at("complete") == true);
    CHECK(manifest.at("master_seed") == 17);
    CHECK(manifest.at("trial_seeds").size() == 4);
    CHECK(manifest.at("trial_seeds")[2] == trial_seed(17, 2));
    CHECK(manifest.at("settings").at("optimizer") == optimizer);
    CHECK(manifest.at("resolved").contains("evals_per_iteration"));

    const std::vector<Trace> traces = read_traces(dir, 4);
    for (std::size_t k = 0; k < 4; ++k) {
      const json& status = manifest.at("trial_status")[k];
      CHECK(status.at("stop") == "budget");
      CHECK(status.at("evaluations") == traces[k].back().evals);
      CHECK(traces[k].back().evals <= 3000);
      const std::size_t per = manifest.at("resolved").at("evals_per_iteration");
      CHECK(traces[k].back().evals + per > 3000);
    }
  }
}

TEST_CASE("summary statistics are recomputable from the CSVs") {
  TempDir tmp;
  const ExperimentSpec spec = spec_from_settings(small_run(tmp.path(), "salomon"));
  run_experiment(spec);
  const json summary = read_json(spec.run_dir() / "summary.json");
  const std::vector<Trace> traces = read_traces(spec.run_dir(), 4);

  const json& checkpoints = summary.at("checkpoints");
  REQUIRE(checkpoints.size() == 10);
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    const std::size_t at = (3000 * (c + 1) + 9) / 10;
    CHECK(checkpoints[c].at("evals") == at);
    std::vector<double> values;
    for (const Trace& t : traces) {
      double best = NAN;
      for (const TraceRow& row : t) {
        if (row.evals <= at) best = row.f_best;
      }
      values.push_back(best);
    }
    double mean = 0.0;
    for (double v : values) mean += v / 4.0;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean) / 4.0;
    std::sort(values.begin(), values.end());
    const double med = 0.5 * (values[1] + values[2]);
    CHECK(checkpoints[c].at("mean").get<double>() == doctest::Approx(mean).epsilon(1e-12));
    CHECK(checkpoints[c].at("std").get<double>() == doctest::Approx(std::sqrt(var)).epsilon(1e-12).scale(mean));
    CHECK(checkpoints[c].at("median").get<double>() == doctest::Approx(med).epsilon(1e-12));
  }
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(summary.at("final").at("f_best")[k].get<double>() == traces[k].back().f_best);
  }
}

TEST_CASE("reruns are byte-identical with serial and parallel trials") {
  TempDir a, b, c;
  const int saved = omp_get_max_threads();
  omp_set_num_threads(4);
  Settings s = small_run(a.path(), "rosenbrock");
  s["gamma"] = "0.01";
  s["initial-frame"] = "random";
  run_experiment(spec_from_settings(s));
  s["out"] = b.path().string();
  run_experiment(spec_from_settings(s));
  s["out"] = c.path().string();
  s["parallel-trials"] = "false";
  s["execution"] = "serial";
  run_experiment(spec_from_settings(s));
  omp_set_num_threads(saved);

  for (const char* name : {"trial_0.csv", "trial_1.csv", "trial_2.csv", "trial_3.csv", "summary.json"}) {
    const std::string first = slurp(a.path() / "rosenbrock_6_adadgs" / name);
    CHECK(!first.empty());
    CHECK(first == slurp(b.path() / "rosenbrock_6_adadgs" / name));
    CHECK(first == slurp(c.path() / "rosenbrock_6_adadgs" / name));
  }
}

TEST_CASE("an unwritable trial file leaves the manifest incomplete") {
  TempDir tmp;
  const ExperimentSpec spec = spec_from_settings(small_run(tmp.path(), "wavy"));
  // A directory where the temporary file should go blocks the write.
  fs::create_directories(spec.run_dir() / "trial_1.csv.tmp");
  CHECK_THROWS(run_experiment(spec));
  const json manifest = read_json(spec.run_dir() / "manifest.json");
  CHECK(manifest.at("complete") == false);
  CHECK(manifest.contains("error"));
  CHECK(fs::exists(spec.run_dir() / "trial_0.csv"));
  CHECK_FALSE(fs::exists(spec.run_dir() / "summary.json"));
}

TEST_CASE("external objectives run through the harness") {
  TempDir tmp;
  Settings s = {{"func", "subprocess"}, {"command", ECHO_SPHERE_PATH},
                {"dim", "3"},          {"budget", "500"},
                {"trials", "2"},       {"lower", "-2"},
                {"upper", "2"},        {"workers", "2"},
                {"out", tmp.path().string()}};
  const ExperimentSpec spec = spec_from_settings(s);
  const ExperimentSummary summary = run_experiment(spec);
  CHECK(summary.failed_trials == 0);
  CHECK(summary.final_median < 1e-2);
  CHECK(fs::exists(tmp.path() / "subprocess_3_adadgs" / "trial_1.csv"));

  s["command"] = std::string(ECHO_SPHERE_PATH) + " --fail-after 40";
  s["workers"] = "1";
  const ExperimentSummary failing = run_experiment(spec_from_settings(s));
  CHECK(failing.failed_trials == 2);
  const json manifest = read_json(tmp.path() / "subprocess_3_adadgs" / "manifest.json");
  CHECK(manifest.at("trial_status")[0].at("stop") == "evaluation_failure");
}

namespace {

int run_cli(const std::string& args, std::string* output = nullptr) {
  const std::string cmd = std::string(ADADGS_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string text;
  char buf[512];
  while (std::fgets(buf, sizeof buf, pipe) != nullptr) text += buf;
  const int status = ::pclose(pipe);
  if (output != nullptr) *output = text;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("command line: list and presets") {
  std::string out;
  CHECK(run_cli("list", &out) == 0);
  std::istringstream lines(out);
  std::vector<std::string> rows;
  for (std::string line; std::getline(lines, line);) rows.push_back(line);
  REQUIRE(rows.size() == 13);
  CHECK(rows[1].rfind("ackley", 0) == 0);
  CHECK(rows[12].rfind("wavy", 0) == 0);
  CHECK(out.find("-39.166*d") != std::string::npos);

  CHECK(run_cli("presets", &out) == 0);
  CHECK(out.find("paper-1000d:") != std::string::npos);
  CHECK(out.find("paper-scaling:") != std::string::npos);
}

TEST_CASE("command line: file settings are overridden by flags") {
  TempDir tmp;
  const fs::path ini = tmp.path() / "run.ini";
  std::ofstream(ini) << "[run]\nfunc = alpine\ndim = 9\nbudget = 800\ntrials = 2\npreset = paper-1000d\n"
                        "[adadgs]\nls-points = 20\n";
  std::string out;
  const int code = run_cli("run --config " + ini.string() + " --dim 5 --out " + tmp.path().string(), &out);
  CHECK(code == 0);
  const json manifest = read_json(tmp.path() / "alpine_5_adadgs" / "manifest.json");
  CHECK(manifest.at("settings").at("dim") == "5");
  CHECK(manifest.at("settings").at("ls-points") == "20");
  CHECK(manifest.at("settings").at("gamma") == "0");
  CHECK(manifest.at("settings").at("trials") == "2");
  CHECK(manifest.at("resolved").at("ls_points") == 20);
}

TEST_CASE("command line: errors give a nonzero exit") {
  std::string out;
  CHECK(run_cli("run --func nosuch --dim 3 --budget 10", &out) == 1);
  CHECK(out.find("nosuch") != std::string::npos);
  CHECK(run_cli("run --dim 3", &out) == 1);
  CHECK(run_cli("frobnicate", &out) != 0);
  CHECK(run_cli("run --preset nope --func ackley --dim 3 --budget 10", &out) == 1);
  TempDir tmp;
  CHECK(run_cli("run --func subprocess --command '" + std::string(ECHO_SPHERE_PATH) +
                    " --fail-after 30' --dim 2 --budget 300 --trials 1 --out " + tmp.path().string(),
                &out) == 2);
}

TEST_CASE("command line: worker count comes from the environment") {
  TempDir tmp;
  std::string out;
  CHECK(run_cli("run --func wavy --dim 3 --budget 200 --trials 3 --out " + tmp.path().string(), &out) == 0);
  const std::string reference = slurp(tmp.path() / "wavy_3_adadgs" / "trial_2.csv");
  CHECK(::setenv("ADADGS_NUM_THREADS", "3", 1) == 0);
  CHECK(run_cli("run --func wavy --dim 3 --budget 200 --trials 3 --out " + tmp.path().string(), &out) == 0);
  CHECK(slurp(tmp.path() / "wavy_3_adadgs" / "trial_2.csv") == reference);
  CHECK(::setenv("ADADGS_NUM_THREADS", "zero", 1) == 0);
  CHECK(run_cli("list", &out) == 1);
  ::unsetenv("ADADGS_NUM_THREADS");
}
