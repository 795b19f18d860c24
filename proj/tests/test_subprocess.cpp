#include <doctest.h>

#include <chrono>
#include <thread>

#include "adadgs/batch.hpp"
#include "adadgs/optimizer.hpp"
#include "adadgs/subprocess.hpp"

using namespace adadgs;
using namespace std::chrono_literals;

namespace {

SubprocessOptions echo(std::vector<std::string> extra = {}, std::size_t workers = 1) {
  SubprocessOptions o;
  o.argv = {ECHO_SPHERE_PATH};
  o.argv.insert(o.argv.end(), extra.begin(), extra.end());
  o.timeout = 5000ms;
  o.workers = workers;
  return o;
}

std::vector<Interval> box(std::size_t d) { return std::vector<Interval>(d, {-5.0, 5.0}); }

}  // namespace

TEST_CASE("echo sphere evaluates the sum of squares") {
  const Objective f = subprocess_objective(echo(), 2, box(2));
  CHECK(f(Vector((Vector(2) << 3.0, 4.0).finished())) == 25.0);
  CHECK(f(Vector((Vector(2) << 0.1, -1e-300).finished())) == 0.1 * 0.1 + 1e-300 * 1e-300);
  CHECK(f.evaluations() == 2);
  CHECK_FALSE(f.concurrent_safe());
}

TEST_CASE("values round-trip exactly through the protocol") {
  const Objective f = subprocess_objective(echo(), 1, box(1));
  for (double v : {0.1, 1.0 / 3.0, 123456.789e-7, -2.5e-8}) {
    CHECK(f(Vector::Constant(1, v)) == v * v);
  }
}

TEST_CASE("a garbled reply is an evaluation failure") {
  const Objective f = subprocess_objective(echo({"--garbage"}), 2, box(2));
  CHECK_THROWS_AS(f(Vector::Ones(2)), EvaluationError);
}

TEST_CASE("the optimizer stops cleanly on a garbled reply") {
  const Objective f = subprocess_objective(echo({"--garbage"}), 3, box(3));
  const OptimizationResult r = adadgs_minimize(f, Vector::Ones(3), AdaDgsConfig{}, 1);
  CHECK(r.stop == StopReason::evaluation_failure);
  CHECK(r.error.find("abc") != std::string::npos);
}

TEST_CASE("an ERR reply is an evaluation failure carrying the message") {
  const Objective f = subprocess_objective(echo({"--fail-after", "2"}), 2, box(2));
  CHECK(f(Vector::Ones(2)) == 2.0);
  CHECK(f(Vector::Ones(2)) == 2.0);
  try {
    f(Vector::Ones(2));
    FAIL("expected EvaluationError");
  } catch (const EvaluationError& e) {
    CHECK(std::string(e.what()).find("ERR") != std::string::npos);
  }
}

TEST_CASE("the optimizer keeps its trace when the process starts failing") {
  const Objective f = subprocess_objective(echo({"--fail-after", "100"}), 2, box(2));
  AdaDgsConfig c;
  c.execution = Execution::serial;
  const OptimizationResult r = adadgs_minimize(f, Vector::Ones(2), c, 3);
  CHECK(r.stop == StopReason::evaluation_failure);
  CHECK(r.trace.size() > 1);
  CHECK(r.trace.back().evals <= 100);
}

TEST_CASE("handshake dimension mismatch is a setup error") {
  CHECK_THROWS_AS(subprocess_objective(echo({"--dim", "3"}), 2, box(2)), SubprocessSetupError);
  CHECK_NOTHROW(subprocess_objective(echo({"--dim", "2"}), 2, box(2)));
}

TEST_CASE("unusable commands are setup errors") {
  SubprocessOptions missing;
  missing.argv = {"/nonexistent/evaluator"};
  CHECK_THROWS_AS(subprocess_objective(missing, 2, box(2)), SubprocessSetupError);

  SubprocessOptions exits;
  exits.argv = {"true"};
  CHECK_THROWS_AS(subprocess_objective(exits, 2, box(2)), SubprocessSetupError);

  SubprocessOptions silent;
  silent.argv = {"sleep", "10"};
  silent.timeout = 200ms;
  const auto start = std::chrono::steady_clock::now();
  CHECK_THROWS_AS(subprocess_objective(silent, 2, box(2)), SubprocessSetupError);
  CHECK(std::chrono::steady_clock::now() - start < 5s);

  SubprocessOptions empty;
  CHECK_THROWS_AS(subprocess_objective(empty, 2, box(2)), SubprocessSetupError);
}

TEST_CASE("wrong dimension is rejected before anything is sent") {
  const Objective f = subprocess_objective(echo(), 2, box(2));
  CHECK_THROWS_AS(f(Vector::Ones(3)), std::invalid_argument);
}

TEST_CASE("a worker pool serves concurrent batches") {
  const Objective f = subprocess_objective(echo({}, 3), 4, box(4));
  CHECK(f.concurrent_safe());
  Matrix points(4, 30);
  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    points.col(j) = Vector::Constant(4, 0.1 * static_cast<double>(j));
  }
  const std::vector<double> serial = evaluate_batch_serial(f, points);
  const std::vector<double> parallel = evaluate_batch_parallel(f, points);
  CHECK(serial == parallel);
  CHECK(f.evaluations() == 60);

  std::vector<std::thread> threads;
  std::vector<double> results(8);
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] { results[t] = f(Vector::Constant(4, static_cast<double>(t))); });
  }
  for (auto& th : threads) th.join();
  for (int t = 0; t < 8; ++t) CHECK(results[t] == 4.0 * t * t);
}
