#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace sdforms {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Per-sample seed, independent of evaluation order.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) { return mix64(seed ^ mix64(index + 1)); }

using Rng = std::mt19937_64;

inline Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the signs
/// of diag(R) absorbed into Q. With special = true the first column is flipped
/// when needed so that det Q = +1.
inline Eigen::MatrixXd haar_orthogonal(Eigen::Index n, Rng& rng, bool special = true) {
  const Eigen::MatrixXd g = gaussian_matrix(n, n, rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  if (special && q.determinant() < 0.0) q.col(0) = -q.col(0);
  return q;
}

}  // namespace sdforms
