// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "adadgs/batch.hpp"
#include "adadgs/benchmarks.hpp"
#include "adadgs/gradient.hpp"

namespace {

using namespace adadgs;

Matrix sample_points(std::size_t dim, Eigen::Index count) {
  Rng rng(1);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  Matrix points(static_cast<Eigen::Index>(dim), count);
  for (Eigen::Index j = 0; j < count; ++j)
    for (Eigen::Index i = 0; i < points.rows(); ++i) points(i, j) = u(rng);
  return points;
}

template <Execution exec>
void BM_EvaluateBatch(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const Objective f = make_benchmark("ackley", dim, 3).objective();
  const Matrix points = sample_points(dim, 4 * state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_batch(f, points, exec));
  }
  state.SetItemsProcessed(state.iterations() * points.cols());
}

template <Execution exec>
void BM_DgsGradient(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const Objective f = make_benchmark("rastrigin", dim, 3).objective();
  const Vector x = sample_points(dim, 1).col(0) / 10.0;
  Rng rng(2);
  const Frame frame = random_rotation(dim, rng);
  const QuadratureRule rule = gauss_hermite_rule(5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dgs_gradient(f, x, frame, 1.0, rule, {true, exec}));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(stencil_size(rule, dim, true)));
}

}  // namespace

BENCHMARK(BM_EvaluateBatch<Execution::serial>)->Arg(50)->Arg(200)->Arg(500);
BENCHMARK(BM_EvaluateBatch<Execution::parallel>)->Arg(50)->Arg(200)->Arg(500);
BENCHMARK(BM_DgsGradient<Execution::serial>)->Arg(50)->Arg(200);
BENCHMARK(BM_DgsGradient<Execution::parallel>)->Arg(50)->Arg(200);

BENCHMARK_MAIN();
