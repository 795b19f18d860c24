#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "adadgs/objective.hpp"

namespace adadgs {

enum class BenchmarkId {
  ackley,
  alpine,
  ellipsoidal,
  quintic,
  rastrigin,
  rosenbrock,
  salomon,
  schaffer_f7,
  sharp_ridge,
  styblinski_tang,
  trigonometric,
  wavy,
};

struct BenchmarkInfo {
  BenchmarkId id;
  std::string_view name;
  Interval domain;  ///< per-coordinate initial search interval
  /// Human-readable optimum as listed by `list`.
  std::string_view optimum_text;
};

/// All twelve functions, sorted alphabetically by name.
const std::vector<BenchmarkInfo>& benchmark_registry();

const BenchmarkInfo& benchmark_info(BenchmarkId id);

/// Throws std::invalid_argument for unknown names.
BenchmarkId parse_benchmark(std::string_view name);

/// Untransformed function value at z.
double eval_base(BenchmarkId id, const VectorRef& z);
double eval_base(std::string_view name, const VectorRef& z);

/// A minimiser of the untransformed function (e.g. all 0.9 for
/// trigonometric, all -2.9035... for Styblinski-Tang).
Vector base_minimizer(BenchmarkId id, std::size_t dim);

/// Global minimum value at full precision.
double optimum_value(BenchmarkId id, std::size_t dim);

/// Per-coordinate minimiser of 0.5 * (z^4 - 16 z^2 + 5 z).
inline constexpr double kStyblinskiTangArgmin = -2.903534027771177;

/// F(x) = F_base(R (x - shift) ), with shift chosen so that x_opt maps onto
/// the base minimiser: shift = x_opt - R^T z*. For functions whose
/// minimiser is z* = 0 the shift is x_opt itself.
class TransformedBenchmark {
 public:
  TransformedBenchmark(BenchmarkId id, Matrix rotation, Vector x_opt);

  /// R = I and shift = 0: evaluates exactly as eval_base.
  static TransformedBenchmark untransformed(BenchmarkId id, std::size_t dim);

  double operator()(const VectorRef& x) const;

  BenchmarkId id() const { return id_; }
  std::size_t dim() const { return static_cast<std::size_t>(x_opt_.size()); }
  const Matrix& rotation() const { return rotation_; }
  const Vector& x_opt() const { return x_opt_; }
  const Vector& shift() const { return shift_; }
  double optimum() const { return optimum_value(id_, dim()); }

  /// Counted objective over the function's initial search box.
  Objective objective() const;

 private:
  TransformedBenchmark(BenchmarkId id, Matrix rotation, Vector x_opt, Vector shift);

  BenchmarkId id_;
  Matrix rotation_;
  Vector x_opt_;
  Vector shift_;
};

/// Draws a Haar rotation and x_opt uniform over the central 80% of the
/// search box. Requires dim >= 2.
TransformedBenchmark make_benchmark(std::string_view name, std::size_t dim, std::uint64_t seed);

}  // namespace adadgs
