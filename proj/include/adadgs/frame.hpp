#pragma once

#include "adadgs/objective.hpp"
#include "adadgs/rng.hpp"

namespace adadgs {

/// Orthonormal direction system. Directions are the COLUMNS of
/// `directions()`, so direction i is `directions().col(i)`.
class Frame {
 public:
  static Frame identity(std::size_t dim);

  /// Validates orthonormality (max-entry error of Q^T Q - I <= 1e-10).
  static Frame from_matrix(Matrix directions);

  std::size_t dim() const { return static_cast<std::size_t>(directions_.cols()); }
  const Matrix& directions() const { return directions_; }
  auto direction(std::size_t i) const { return directions_.col(static_cast<Eigen::Index>(i)); }

 private:
  explicit Frame(Matrix directions) : directions_(std::move(directions)) {}
  Matrix directions_;
};

/// Max-entry deviation of Q Q^T from the identity.
double orthonormality_error(const Matrix& q);

/// Haar-distributed orthogonal matrix: QR of a standard Gaussian matrix with
/// the signs of R's diagonal folded into Q.
Matrix haar_orthogonal(std::size_t dim, Rng& rng);

/// Random frame with Haar-distributed directions.
Frame random_rotation(std::size_t dim, Rng& rng);

}  // namespace adadgs
