#pragma once

// Reproducible random draws: configurations, orthogonal matrices, simplex
// points. Every stream is keyed by (seed, index) so restarts are
// independent of execution order.

#include "framepot/core.hpp"

#include <cstdint>
#include <random>

namespace framepot {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Generator for stream `index` of run `seed`.
inline std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(~index)));
}

template <class Rng>
Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

/// N points drawn uniformly from the unit sphere in R^d.
template <class Rng>
Configuration random_configuration(int n, int d, Rng& rng) {
  return Configuration::normalized(gaussian_matrix(n, d, rng));
}

/// Haar-distributed orthogonal d x d matrix.
template <class Rng>
Matrix random_orthogonal(int d, Rng& rng) {
  const Matrix a = gaussian_matrix(d, d, rng);
  const Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  for (int j = 0; j < d; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  return q;
}

/// Uniform (flat Dirichlet) point on the probability simplex.
template <class Rng>
Vector random_simplex_point(int n, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  Vector z(n);
  for (int i = 0; i < n; ++i) z(i) = expo(rng);
  return z / z.sum();
}

}  // namespace framepot
