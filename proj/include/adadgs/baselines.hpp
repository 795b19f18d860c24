#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>

#include "adadgs/batch.hpp"
#include "adadgs/gradient.hpp"
#include "adadgs/trace.hpp"

namespace adadgs {

enum class BaselineMethod { es_bpop, nesterov, fd };

BaselineMethod parse_baseline_method(std::string_view name);
std::string_view to_string(BaselineMethod method);

/// Fixed-step reference optimizers. `sigma_or_h` is the smoothing radius for
/// es_bpop and the difference step for nesterov and fd.
///
/// Defaults (learning_rate, sigma_or_h): es_bpop (0.01, 0.1),
/// nesterov (1e-3, 1e-4), fd (0.01, 1e-5).
struct BaselineConfig {
  BaselineMethod method = BaselineMethod::fd;
  double learning_rate = 0.01;
  double sigma_or_h = 1e-5;
  /// es_bpop only. Default: 5 * d rounded up to even, the per-iteration
  /// cost of a 5-point DGS gradient.
  std::optional<std::size_t> population;
  bool antithetic = true;
  std::size_t budget = std::numeric_limits<std::size_t>::max();
  std::size_t max_iterations = std::numeric_limits<std::size_t>::max();
  Execution execution = Execution::parallel;

  static BaselineConfig defaults(BaselineMethod method);
};

/// Population used by es_bpop in `dim` dimensions.
std::size_t es_population(const BaselineConfig& config, std::size_t dim);

/// Evaluations consumed by one iteration of the configured method.
std::size_t baseline_evals_per_iteration(const BaselineConfig& config, std::size_t dim);

/// Central-difference gradient, 2d evaluations ordered (x + h e_i, x - h e_i).
struct FdGradient {
  Vector vector;
  double mean_value = 0.0;
  std::size_t evals_used = 0;
  BestSample best_sample;
};
FdGradient fd_gradient(const Objective& f, const Vector& x, double h,
                       Execution execution = Execution::parallel);

// In the traces below, f_current is the loss at the iterate the step started
// from when it is evaluated (nesterov) and otherwise the mean of the losses
// queried during the step. f_best is the lowest loss of any queried point.

OptimizationResult es_bpop_minimize(const Objective& f, const Vector& x0,
                                    const BaselineConfig& config, std::uint64_t seed);
OptimizationResult nesterov_minimize(const Objective& f, const Vector& x0,
                                     const BaselineConfig& config, std::uint64_t seed);
OptimizationResult fd_minimize(const Objective& f, const Vector& x0,
                               const BaselineConfig& config);

/// Dispatches on config.method.
OptimizationResult baseline_minimize(const Objective& f, const Vector& x0,
                                     const BaselineConfig& config, std::uint64_t seed);

}  // namespace adadgs
