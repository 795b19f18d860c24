#include "adadgs/frame.hpp"

#include <Eigen/QR>
#include <random>
#include <stdexcept>

namespace adadgs {

Frame Frame::identity(std::size_t dim) {
  if (dim == 0) {
    throw std::invalid_argument("Frame: dimension must be positive");
  }
  const auto d = static_cast<Eigen::Index>(dim);
  return Frame(Matrix::Identity(d, d));
}

Frame Frame::from_matrix(Matrix directions) {
  if (directions.rows() != directions.cols() || directions.rows() == 0) {
    throw std::invalid_argument("Frame: direction matrix must be square and non-empty");
  }
  if (!directions.allFinite() || orthonormality_error(directions) > 1e-10) {
    throw std::invalid_argument("Frame: directions are not orthonormal");
  }
  return Frame(std::move(directions));
}

double orthonormality_error(const Matrix& q) {
  const Matrix gram = q * q.transpose();
  return (gram - Matrix::Identity(q.rows(), q.rows())).cwiseAbs().maxCoeff();
}

Matrix haar_orthogonal(std::size_t dim, Rng& rng) {
  if (dim == 0) {
    throw std::invalid_argument("haar_orthogonal: dimension must be positive");
  }
  const auto d = static_cast<Eigen::Index>(dim);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix gaussian(d, d);
  // Column-major fill order is part of the seeded contract.
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      gaussian(i, j) = normal(rng);
    }
  }
  Eigen::HouseholderQR<Matrix> qr(gaussian);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < d; ++j) {
    if (r(j, j) < 0.0) {
      q.col(j) = -q.col(j);
    }
  }
  return q;
}

Frame random_rotation(std::size_t dim, Rng& rng) {
  return Frame::from_matrix(haar_orthogonal(dim, rng));
}

}  // namespace adadgs
