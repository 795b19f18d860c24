#include "adadgs/batch.hpp"

#include <omp.h>

#include <cmath>
#include <exception>
#include <limits>

namespace adadgs {

namespace {

EvaluationError non_finite(const Objective& f, std::size_t index) {
  return EvaluationError("objective '" + f.label() + "' returned a non-finite value at sample " +
                             std::to_string(index),
                         index);
}

}  // namespace

std::vector<double> evaluate_batch_serial(const Objective& f, const Matrix& points) {
  const auto n = static_cast<std::size_t>(points.cols());
  std::vector<double> values(n);
  for (std::size_t k = 0; k < n; ++k) {
    try {
      values[k] = f(points.col(static_cast<Eigen::Index>(k)));
    } catch (const EvaluationError& e) {
      throw EvaluationError(e.what(), k);
    }
    if (!std::isfinite(values[k])) {
      throw non_finite(f, k);
    }
  }
  return values;
}

std::vector<double> evaluate_batch_parallel(const Objective& f, const Matrix& points) {
  if (!f.concurrent_safe() || omp_in_parallel()) {
    return evaluate_batch_serial(f, points);
  }
  const auto n = static_cast<std::ptrdiff_t>(points.cols());
  std::vector<double> values(static_cast<std::size_t>(n));
  std::ptrdiff_t first_failure = std::numeric_limits<std::ptrdiff_t>::max();
  std::exception_ptr failure;

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    try {
      values[static_cast<std::size_t>(k)] = f(points.col(k));
    } catch (...) {
#pragma omp critical(adadgs_batch_failure)
      {
        if (k < first_failure) {
          first_failure = k;
          failure = std::current_exception();
        }
      }
    }
  }

  for (std::ptrdiff_t k = 0; k < n; ++k) {
    if (k == first_failure) {
      try {
        std::rethrow_exception(failure);
      } catch (const EvaluationError& e) {
        throw EvaluationError(e.what(), static_cast<std::size_t>(k));
      }
    }
    if (!std::isfinite(values[static_cast<std::size_t>(k)])) {
      throw non_finite(f, static_cast<std::size_t>(k));
    }
  }
  return values;
}

std::vector<double> evaluate_batch(const Objective& f, const Matrix& points,
                                   Execution execution) {
  return execution == Execution::parallel ? evaluate_batch_parallel(f, points)
                                          : evaluate_batch_serial(f, points);
}

}  // namespace adadgs
