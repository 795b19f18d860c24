#include "adadgs/gradient.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace adadgs {

namespace {

void require_finite_point(const Vector& x, double sigma, const char* who) {
  if (!x.allFinite()) {
    throw std::invalid_argument(std::string(who) + ": non-finite point");
  }
  if (!std::isfinite(sigma) || !(sigma > 0.0)) {
    throw std::invalid_argument(std::string(who) + ": sigma must be finite and positive");
  }
}

}  // namespace

std::size_t stencil_size(const QuadratureRule& rule, std::size_t dim, bool skip_zero_node) {
  const std::size_t per_direction =
      static_cast<std::size_t>(rule.order) - (skip_zero_node && rule.zero_node() ? 1 : 0);
  return per_direction * dim;
}

Stencil dgs_stencil(const Vector& x, const Frame& frame, double sigma,
                    const QuadratureRule& rule, bool skip_zero_node) {
  require_finite_point(x, sigma, "dgs_stencil");
  if (frame.dim() != static_cast<std::size_t>(x.size())) {
    throw std::invalid_argument("dgs_stencil: frame dimension does not match point");
  }
  const std::size_t d = frame.dim();
  const auto zero = rule.zero_node();

  Stencil stencil;
  stencil.points.resize(x.size(), static_cast<Eigen::Index>(stencil_size(rule, d, skip_zero_node)));
  stencil.labels.reserve(static_cast<std::size_t>(stencil.points.cols()));
  Eigen::Index column = 0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t m = 0; m < rule.nodes.size(); ++m) {
      if (skip_zero_node && zero && *zero == m) {
        continue;
      }
      const double offset = std::numbers::sqrt2 * sigma * rule.nodes[m];
      stencil.points.col(column) = x + offset * frame.direction(i);
      stencil.labels.push_back({i, m});
      ++column;
    }
  }
  return stencil;
}

double directional_derivative(std::span<const double> values, double sigma,
                              const QuadratureRule& rule) {
  const auto zero = rule.zero_node();
  const std::size_t order = rule.nodes.size();
  const bool skipped = values.size() + 1 == order && zero.has_value();
  if (values.size() != order && !skipped) {
    throw std::invalid_argument("directional_derivative: expected " + std::to_string(order) +
                                " values, got " + std::to_string(values.size()));
  }
  if (!std::isfinite(sigma) || !(sigma > 0.0)) {
    throw std::invalid_argument("directional_derivative: sigma must be finite and positive");
  }

  double sum = 0.0;
  std::size_t k = 0;
  for (std::size_t m = 0; m < order; ++m) {
    if (zero && *zero == m) {
      if (!skipped) {
        if (!std::isfinite(values[k])) {
          throw EvaluationError("non-finite objective value at sample " + std::to_string(k), k);
        }
        ++k;
      }
      continue;
    }
    const double value = values[k];
    if (!std::isfinite(value)) {
      throw EvaluationError("non-finite objective value at sample " + std::to_string(k), k);
    }
    sum += rule.weights[m] * value * (std::numbers::sqrt2 * rule.nodes[m]);
    ++k;
  }
  return sum / (std::sqrt(std::numbers::pi) * sigma);
}

DgsGradient dgs_gradient(const Objective& f, const Vector& x, const Frame& frame,
                         double sigma, const QuadratureRule& rule, DgsOptions options) {
  const Stencil stencil = dgs_stencil(x, frame, sigma, rule, options.skip_zero_node);
  const std::vector<double> values = evaluate_batch(f, stencil.points, options.execution);

  const std::size_t d = frame.dim();
  const std::size_t per_direction = values.size() / d;
  DgsGradient out;
  out.directional.resize(static_cast<Eigen::Index>(d));
  out.evals_used = values.size();
  for (std::size_t i = 0; i < d; ++i) {
    const std::span<const double> slice(values.data() + i * per_direction, per_direction);
    try {
      out.directional[static_cast<Eigen::Index>(i)] = directional_derivative(slice, sigma, rule);
    } catch (const EvaluationError& e) {
      throw EvaluationError(e.what(), i * per_direction + e.sample_index().value_or(0));
    }
  }
  for (std::size_t k = 0; k < values.size(); ++k) {
    out.best_sample.offer(values[k], stencil.points.col(static_cast<Eigen::Index>(k)));
  }
  out.vector = frame.directions() * out.directional;
  return out;
}

McGradient gs_mc_gradient(const Objective& f, const Vector& x, double sigma,
                          std::size_t n_samples, bool antithetic, Rng& rng,
                          Execution execution) {
  require_finite_point(x, sigma, "gs_mc_gradient");
  if (n_samples == 0) {
    throw std::invalid_argument("gs_mc_gradient: n_samples must be positive");
  }
  if (antithetic && n_samples % 2 != 0) {
    throw std::invalid_argument("gs_mc_gradient: antithetic sampling needs an even n_samples");
  }
  const Eigen::Index d = x.size();
  const std::size_t n_directions = antithetic ? n_samples / 2 : n_samples;

  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix directions(d, static_cast<Eigen::Index>(n_directions));
  for (Eigen::Index j = 0; j < directions.cols(); ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      directions(i, j) = normal(rng);
    }
  }

  // Antithetic layout: column 2k is x + sigma u_k, column 2k+1 is x - sigma u_k.
  Matrix points(d, static_cast<Eigen::Index>(n_samples));
  for (Eigen::Index j = 0; j < directions.cols(); ++j) {
    if (antithetic) {
      points.col(2 * j) = x + sigma * directions.col(j);
      points.col(2 * j + 1) = x - sigma * directions.col(j);
    } else {
      points.col(j) = x + sigma * directions.col(j);
    }
  }
  const std::vector<double> values = evaluate_batch(f, points, execution);

  McGradient out;
  out.vector = Vector::Zero(d);
  out.evals_used = values.size();
  double total = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    total += values[k];
    out.best_sample.offer(values[k], points.col(static_cast<Eigen::Index>(k)));
  }
  out.mean_value = total / static_cast<double>(values.size());
  for (Eigen::Index j = 0; j < directions.cols(); ++j) {
    const auto k = static_cast<std::size_t>(j);
    const double weight = antithetic ? values[2 * k] - values[2 * k + 1] : values[k];
    out.vector += weight * directions.col(j);
  }
  out.vector /= static_cast<double>(n_samples) * sigma;
  return out;
}

}  // namespace adadgs
