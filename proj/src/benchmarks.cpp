#include "adadgs/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <random>
#include <stdexcept>

#include "adadgs/frame.hpp"
#include "adadgs/rng.hpp"

namespace adadgs {

namespace {

constexpr double kPi = std::numbers::pi;

double ackley(const VectorRef& z) {
  constexpr double a = 20.0;
  constexpr double b = 0.2;
  constexpr double c = 2.0 * kPi;
  const double d = static_cast<double>(z.size());
  double squares = 0.0;
  double cosines = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    squares += z[i] * z[i];
    cosines += std::cos(c * z[i]);
  }
  return -a * std::exp(-b * std::sqrt(squares / d)) - std::exp(cosines / d) + a +
         std::numbers::e;
}

double alpine(const VectorRef& z) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    sum += std::abs(z[i] * std::sin(z[i]) + 0.1 * z[i]);
  }
  return sum;
}

double ellipsoidal(const VectorRef& z) {
  const Eigen::Index d = z.size();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double exponent =
        d > 1 ? 6.0 * static_cast<double>(i) / static_cast<double>(d - 1) : 0.0;
    sum += std::pow(10.0, exponent) * z[i] * z[i];
  }
  return sum;
}

double quintic(const VectorRef& z) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double v = z[i];
    // v^5 - 3v^4 + 4v^3 + 2v^2 - 10v - 4 in Horner form
    sum += std::abs(((((v - 3.0) * v + 4.0) * v + 2.0) * v - 10.0) * v - 4.0);
  }
  return sum;
}

double rastrigin(const VectorRef& z) {
  double sum = 10.0 * static_cast<double>(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    sum += z[i] * z[i] - 10.0 * std::cos(2.0 * kPi * z[i]);
  }
  return sum;
}

double rosenbrock(const VectorRef& z) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i + 1 < z.size(); ++i) {
    const double ridge = z[i + 1] - z[i] * z[i];
    const double offset = z[i] - 1.0;
    sum += 100.0 * ridge * ridge + offset * offset;
  }
  return sum;
}

double schaffer_f7(const VectorRef& z) {
  const Eigen::Index d = z.size();
  if (d < 2) {
    return 0.0;
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i + 1 < d; ++i) {
    const double s = std::sqrt(z[i] * z[i] + z[i + 1] * z[i + 1]);
    const double root = std::sqrt(s);
    const double wave = std::sin(50.0 * std::pow(s, 0.2));
    sum += root + root * wave * wave;
  }
  return sum * sum / static_cast<double>(d - 1);
}

double sharp_ridge(const VectorRef& z) {
  double tail = 0.0;
  for (Eigen::Index i = 1; i < z.size(); ++i) {
    tail += z[i] * z[i];
  }
  return z[0] * z[0] + 100.0 * std::sqrt(tail);
}

double salomon(const VectorRef& z) {
  const double r = z.norm();
  return 1.0 - std::cos(2.0 * kPi * r) + 0.1 * r;
}

double styblinski_tang(const VectorRef& z) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double v = z[i];
    const double v2 = v * v;
    sum += v2 * v2 - 16.0 * v2 + 5.0 * v;
  }
  return 0.5 * sum;
}

double trigonometric(const VectorRef& z) {
  double sum = 1.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double u = z[i] - 0.9;
    const double u2 = u * u;
    const double s7 = std::sin(7.0 * u2);
    const double s14 = std::sin(14.0 * u2);
    sum += 8.0 * s7 * s7 + 6.0 * s14 * s14 + u2;
  }
  return sum;
}

double wavy(const VectorRef& z) {
  constexpr double k = 10.0;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    sum += std::cos(k * z[i]) * std::exp(-0.5 * z[i] * z[i]);
  }
  return 1.0 - sum / static_cast<double>(z.size());
}

double styblinski_tang_1d_minimum() {
  const double v = kStyblinskiTangArgmin;
  return 0.5 * (v * v * v * v - 16.0 * v * v + 5.0 * v);
}

}  // namespace

const std::vector<BenchmarkInfo>& benchmark_registry() {
  static const std::vector<BenchmarkInfo> registry = {
      {BenchmarkId::ackley, "ackley", {-32.768, 32.768}, "0"},
      {BenchmarkId::alpine, "alpine", {-10.0, 10.0}, "0"},
      {BenchmarkId::ellipsoidal, "ellipsoidal", {-2.0, 2.0}, "0"},
      {BenchmarkId::quintic, "quintic", {-10.0, 10.0}, "0"},
      {BenchmarkId::rastrigin, "rastrigin", {-5.12, 5.12}, "0"},
      {BenchmarkId::rosenbrock, "rosenbrock", {-5.0, 10.0}, "0"},
      {BenchmarkId::salomon, "salomon", {-100.0, 100.0}, "0"},
      {BenchmarkId::schaffer_f7, "schaffer_f7", {-100.0, 100.0}, "0"},
      {BenchmarkId::sharp_ridge, "sharp_ridge", {-10.0, 10.0}, "0"},
      {BenchmarkId::styblinski_tang, "styblinski_tang", {-5.0, 5.0}, "-39.166*d"},
      {BenchmarkId::trigonometric, "trigonometric", {-500.0, 500.0}, "1"},
      {BenchmarkId::wavy, "wavy", {-kPi, kPi}, "0"},
  };
  return registry;
}

const BenchmarkInfo& benchmark_info(BenchmarkId id) {
  for (const auto& info : benchmark_registry()) {
    if (info.id == id) {
      return info;
    }
  }
  throw std::invalid_argument("unknown benchmark id");
}

BenchmarkId parse_benchmark(std::string_view name) {
  for (const auto& info : benchmark_registry()) {
    if (info.name == name) {
      return info.id;
    }
  }
  throw std::invalid_argument("unknown benchmark function '" + std::string(name) + "'");
}

double eval_base(BenchmarkId id, const VectorRef& z) {
  switch (id) {
    case BenchmarkId::ackley:
      return ackley(z);
    case BenchmarkId::alpine:
      return alpine(z);
    case BenchmarkId::ellipsoidal:
      return ellipsoidal(z);
    case BenchmarkId::quintic:
      return quintic(z);
    case BenchmarkId::rastrigin:
      return rastrigin(z);
    case BenchmarkId::rosenbrock:
      return rosenbrock(z);
    case BenchmarkId::salomon:
      return salomon(z);
    case BenchmarkId::schaffer_f7:
      return schaffer_f7(z);
    case BenchmarkId::sharp_ridge:
      return sharp_ridge(z);
    case BenchmarkId::styblinski_tang:
      return styblinski_tang(z);
    case BenchmarkId::trigonometric:
      return trigonometric(z);
    case BenchmarkId::wavy:
      return wavy(z);
  }
  throw std::invalid_argument("unknown benchmark id");
}

double eval_base(std::string_view name, const VectorRef& z) {
  return eval_base(parse_benchmark(name), z);
}

Vector base_minimizer(BenchmarkId id, std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  switch (id) {
    case BenchmarkId::quintic:
      return Vector::Constant(d, -1.0);
    case BenchmarkId::rosenbrock:
      return Vector::Constant(d, 1.0);
    case BenchmarkId::styblinski_tang:
      return Vector::Constant(d, kStyblinskiTangArgmin);
    case BenchmarkId::trigonometric:
      return Vector::Constant(d, 0.9);
    default:
      return Vector::Zero(d);
  }
}

double optimum_value(BenchmarkId id, std::size_t dim) {
  switch (id) {
    case BenchmarkId::styblinski_tang:
      return styblinski_tang_1d_minimum() * static_cast<double>(dim);
    case BenchmarkId::trigonometric:
      return 1.0;
    default:
      return 0.0;
  }
}

TransformedBenchmark::TransformedBenchmark(BenchmarkId id, Matrix rotation, Vector x_opt)
    : id_(id), rotation_(std::move(rotation)), x_opt_(std::move(x_opt)) {
  if (rotation_.rows() != x_opt_.size() || rotation_.cols() != x_opt_.size()) {
    throw std::invalid_argument("TransformedBenchmark: rotation and x_opt sizes differ");
  }
  if (orthonormality_error(rotation_) > 1e-10) {
    throw std::invalid_argument("TransformedBenchmark: rotation is not orthonormal");
  }
  shift_ = x_opt_ - rotation_.transpose() * base_minimizer(id_, dim());
}

TransformedBenchmark::TransformedBenchmark(BenchmarkId id, Matrix rotation, Vector x_opt,
                                           Vector shift)
    : id_(id), rotation_(std::move(rotation)), x_opt_(std::move(x_opt)), shift_(std::move(shift)) {}

TransformedBenchmark TransformedBenchmark::untransformed(BenchmarkId id, std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return TransformedBenchmark(id, Matrix::Identity(d, d), base_minimizer(id, dim),
                              Vector::Zero(d));
}

double TransformedBenchmark::operator()(const VectorRef& x) const {
  const Vector z = rotation_ * (x - shift_);
  return eval_base(id_, z);
}

Objective TransformedBenchmark::objective() const {
  const auto& info = benchmark_info(id_);
  std::vector<Interval> bounds(dim(), info.domain);
  return Objective(std::string(info.name), std::move(bounds),
                   [self = std::make_shared<const TransformedBenchmark>(*this)](
                       const VectorRef& x) { return (*self)(x); });
}

TransformedBenchmark make_benchmark(std::string_view name, std::size_t dim, std::uint64_t seed) {
  const BenchmarkId id = parse_benchmark(name);
  if (dim < 2) {
    throw std::invalid_argument("make_benchmark: dimension must be at least 2");
  }
  Rng rotation_rng(derive_seed(seed, 0));
  Rng location_rng(derive_seed(seed, 1));
  Matrix rotation = haar_orthogonal(dim, rotation_rng);

  const Interval domain = benchmark_info(id).domain;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector x_opt(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < x_opt.size(); ++i) {
    x_opt[i] = domain.lower + domain.width() * (0.1 + 0.8 * unit(location_rng));
  }
  return TransformedBenchmark(id, std::move(rotation), std::move(x_opt));
}

}  // namespace adadgs
