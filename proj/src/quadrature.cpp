#include "adadgs/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace adadgs {

namespace {

struct HermiteValues {
  double last = 0.0;      // p_{n}(x)
  double previous = 0.0;  // p_{n-1}(x)
  double sum_squares = 0.0;  // sum_{k<n} p_k(x)^2
};

// Orthonormal Hermite polynomials w.r.t. exp(-x^2):
//   p_0 = pi^{-1/4},  x p_k = a_{k+1} p_{k+1} + a_k p_{k-1},  a_k = sqrt(k/2).
HermiteValues orthonormal_hermite(int n, double x) {
  HermiteValues out;
  double prev = 0.0;
  double cur = 1.0 / std::sqrt(std::sqrt(std::numbers::pi));
  for (int k = 0; k < n; ++k) {
    out.sum_squares += cur * cur;
    const double a_k = std::sqrt(0.5 * k);
    const double a_next = std::sqrt(0.5 * (k + 1));
    const double next = (x * cur - a_k * prev) / a_next;
    prev = cur;
    cur = next;
  }
  out.last = cur;
  out.previous = prev;
  return out;
}

}  // namespace

std::optional<std::size_t> QuadratureRule::zero_node() const {
  if (order % 2 == 1) {
    return static_cast<std::size_t>(order / 2);
  }
  return std::nullopt;
}

QuadratureRule gauss_hermite_rule(int order) {
  if (order < 1 || order > kMaxQuadratureOrder) {
    throw std::invalid_argument("gauss_hermite_rule: order must be in [1, " +
                                std::to_string(kMaxQuadratureOrder) + "], got " +
                                std::to_string(order));
  }
  const auto m = static_cast<Eigen::Index>(order);

  // Golub–Welsch: eigenvalues of the symmetric tridiagonal Jacobi matrix.
  Eigen::VectorXd diagonal = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd subdiagonal(std::max<Eigen::Index>(m - 1, 0));
  for (Eigen::Index k = 0; k + 1 < m; ++k) {
    subdiagonal[k] = std::sqrt(0.5 * static_cast<double>(k + 1));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diagonal, subdiagonal, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("gauss_hermite_rule: eigensolver failed");
  }

  QuadratureRule rule;
  rule.order = order;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    double x = solver.eigenvalues()[i];
    // p_n' = sqrt(2n) p_{n-1}
    for (int iter = 0; iter < 8; ++iter) {
      const HermiteValues h = orthonormal_hermite(order, x);
      const double derivative = std::sqrt(2.0 * order) * h.previous;
      if (derivative == 0.0) {
        break;
      }
      const double dx = h.last / derivative;
      x -= dx;
      if (std::abs(dx) <= 1e-16 * std::max(1.0, std::abs(x))) {
        break;
      }
    }
    rule.nodes[i] = x;
    // Christoffel number: 1 / sum_{k<n} p_k(x)^2.
    rule.weights[i] = 1.0 / orthonormal_hermite(order, x).sum_squares;
  }

  for (int i = 0; i < order / 2; ++i) {
    const int j = order - 1 - i;
    const double node = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double weight = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -node;
    rule.nodes[j] = node;
    rule.weights[i] = weight;
    rule.weights[j] = weight;
  }
  if (auto zero = rule.zero_node()) {
    rule.nodes[*zero] = 0.0;
  }
  return rule;
}

}  // namespace adadgs
