#pragma once

#include <limits>
#include <span>
#include <vector>

#include "adadgs/batch.hpp"
#include "adadgs/frame.hpp"
#include "adadgs/quadrature.hpp"

namespace adadgs {

/// Lowest value among a set of evaluated points.
struct BestSample {
  double value = std::numeric_limits<double>::infinity();
  Vector point;

  void offer(double candidate, const VectorRef& at) {
    if (candidate < value) {
      value = candidate;
      point = at;
    }
  }
};

struct StencilLabel {
  std::size_t direction = 0;
  std::size_t node = 0;
};

/// Sample locations x + sqrt(2) * sigma * v_m * xi_i, one column per point,
/// ordered direction-major then by ascending node index.
struct Stencil {
  Matrix points;
  std::vector<StencilLabel> labels;
};

/// Builds the DGS sample stencil. With `skip_zero_node`, the exact-zero
/// node of an odd rule is omitted since its summand is identically zero.
Stencil dgs_stencil(const Vector& x, const Frame& frame, double sigma,
                    const QuadratureRule& rule, bool skip_zero_node = true);

/// Number of stencil points for a rule in `dim` dimensions.
std::size_t stencil_size(const QuadratureRule& rule, std::size_t dim, bool skip_zero_node);

/// Gauss–Hermite estimate of the Gaussian-smoothed directional derivative
///
///   (1 / (sqrt(pi) sigma)) * sum_m w_m F(x + sqrt(2) sigma v_m xi) sqrt(2) v_m
///
/// `values` holds one entry per node, or one fewer for an odd rule whose
/// zero node was skipped. Summation runs in ascending node order.
double directional_derivative(std::span<const double> values, double sigma,
                              const QuadratureRule& rule);

struct DgsGradient {
  Vector directional;  ///< per-direction smoothed derivatives
  Vector vector;       ///< sum_i directional[i] * xi_i
  std::size_t evals_used = 0;
  BestSample best_sample;
};

struct DgsOptions {
  bool skip_zero_node = true;
  Execution execution = Execution::parallel;
};

/// DGS gradient of `f` at `x`: one batched stencil evaluation followed by
/// a fixed-order assembly on the calling thread.
DgsGradient dgs_gradient(const Objective& f, const Vector& x, const Frame& frame,
                         double sigma, const QuadratureRule& rule, DgsOptions options = {});

struct McGradient {
  Vector vector;
  std::size_t evals_used = 0;
  double mean_value = 0.0;  ///< mean loss over the queried points
  BestSample best_sample;
};

/// Monte-Carlo Gaussian-smoothing gradient (1/(n sigma)) sum_k F(x + sigma u_k) u_k.
/// With `antithetic`, n/2 directions are drawn and each is used as +u and -u,
/// which makes the estimate exactly zero for a constant F.
McGradient gs_mc_gradient(const Objective& f, const Vector& x, double sigma,
                          std::size_t n_samples, bool antithetic, Rng& rng,
                          Execution execution = Execution::parallel);

}  // namespace adadgs
