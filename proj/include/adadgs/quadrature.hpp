#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace adadgs {

/// Physicists' Gauss–Hermite rule: approximates the integral of
/// f(v) exp(-v^2) over the real line by sum_m weights[m] * f(nodes[m]).
/// Exact for polynomials up to degree 2*order - 1.
///
/// Nodes are strictly ascending and exactly antisymmetric; weights are
/// exactly symmetric. For odd orders the middle node is exactly 0.
struct QuadratureRule {
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;

  /// Index of the exact-zero node (odd orders only).
  std::optional<std::size_t> zero_node() const;
};

inline constexpr int kMaxQuadratureOrder = 64;

/// Builds the rule of the given order (1..64) from the Jacobi matrix of
/// the Hermite recurrence, then polishes each node with Newton steps.
/// Throws std::invalid_argument when `order` is out of range.
QuadratureRule gauss_hermite_rule(int order);

}  // namespace adadgs
