#pragma once

#include <cmath>
#include <functional>
#include <random>

#include "adadgs/objective.hpp"
#include "adadgs/rng.hpp"

namespace adadgs::testing {

inline Objective make_objective(std::size_t dim, std::function<double(const VectorRef&)> fn,
                                Interval box = {-1.0, 1.0}, std::string label = "test") {
  return Objective(std::move(label), std::vector<Interval>(dim, box), std::move(fn));
}

inline Vector random_vector(std::size_t dim, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Vector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = normal(rng);
  return v;
}

/// Random symmetric matrix.
inline Matrix random_symmetric(std::size_t dim, Rng& rng) {
  const auto d = static_cast<Eigen::Index>(dim);
  Matrix a(d, d);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) a(i, j) = normal(rng);
  return 0.5 * (a + a.transpose());
}

inline double relative_error(const Vector& got, const Vector& want) {
  return (got - want).norm() / std::max(want.norm(), 1e-300);
}

/// Trapezoid rule on [lo, hi]; spectrally accurate for smooth integrands
/// that decay like exp(-v^2) well inside the interval.
inline double trapezoid(const std::function<double(double)>& f, double lo, double hi,
                        std::size_t n) {
  const double h = (hi - lo) / static_cast<double>(n);
  double sum = 0.5 * (f(lo) + f(hi));
  for (std::size_t i = 1; i < n; ++i) sum += f(lo + h * static_cast<double>(i));
  return sum * h;
}

}  // namespace adadgs::testing
