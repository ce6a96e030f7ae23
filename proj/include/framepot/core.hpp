#pragma once

// Unit-vector configurations, Gram matrices and the lifted-ETF family.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace framepot {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace tol {
inline constexpr double unit_norm = 1e-10;
inline constexpr double symmetry = 1e-12;
inline constexpr double psd = 1e-9;
inline constexpr double rank = 1e-8;
inline constexpr double nullspace = 1e-8;
}  // namespace tol

/// Raised when user-supplied data violates a domain invariant
/// (non-unit rows, asymmetric or indefinite Gram, rank too large).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An ordered list of N unit vectors in R^d, stored as the rows of an N x d
/// matrix.
class Configuration {
 public:
  /// Validates that every row has unit norm; throws ValidationError naming
  /// the first offending row otherwise.
  explicit Configuration(Matrix rows) : rows_(std::move(rows)) {
    if (rows_.rows() < 1 || rows_.cols() < 1)
      throw ValidationError("configuration needs N >= 1 and d >= 1");
    for (Eigen::Index i = 0; i < rows_.rows(); ++i) {
      const double norm = rows_.row(i).norm();
      if (!std::isfinite(norm) || std::abs(norm - 1.0) > tol::unit_norm) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "row " << i << " has norm " << norm << " (expected 1)";
        throw ValidationError(msg.str());
      }
    }
  }

  /// Rescales every row to unit length. Zero rows are rejected.
  static Configuration normalized(Matrix rows) {
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
      const double norm = rows.row(i).norm();
      if (!(norm > 0.0))
        throw ValidationError("row " + std::to_string(i) +
                              " is zero and cannot be normalized");
      rows.row(i) /= norm;
    }
    return Configuration(std::move(rows));
  }

  const Matrix& vectors() const noexcept { return rows_; }
  Eigen::Index n() const noexcept { return rows_.rows(); }
  Eigen::Index dim() const noexcept { return rows_.cols(); }

 private:
  Matrix rows_;
};

/// Symmetric PSD matrix with unit diagonal.
class GramMatrix {
 public:
  explicit GramMatrix(Matrix entries) : entries_(std::move(entries)) {
    const auto n = entries_.rows();
    if (n < 1 || entries_.cols() != n)
      throw ValidationError("Gram matrix must be square and non-empty");
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(entries_(i, i) - 1.0) > tol::unit_norm)
        throw ValidationError("Gram diagonal entry " + std::to_string(i) +
                              " is not 1");
      for (Eigen::Index j = i + 1; j < n; ++j)
        if (!(std::abs(entries_(i, j) - entries_(j, i)) <= tol::symmetry))
          throw ValidationError("Gram matrix is not symmetric");
    }
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(entries_,
                                                    Eigen::EigenvaluesOnly);
    if (eig.eigenvalues()(0) < -tol::psd)
      throw ValidationError("Gram matrix is not positive semidefinite");
  }

  const Matrix& entries() const noexcept { return entries_; }
  Eigen::Index n() const noexcept { return entries_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const {
    return entries_(i, j);
  }

 private:
  Matrix entries_;
};

/// Unit vector y with G y ~ 0.
struct NullVector {
  Vector coords;
  double residual = 0.0;
};

inline GramMatrix gram(const Configuration& X) {
  Matrix g = X.vectors() * X.vectors().transpose();
  // Exact symmetry and unit diagonal; rows are unit within 1e-10 already.
  g = 0.5 * (g + g.transpose()).eval();
  g.diagonal().setOnes();
  return GramMatrix(std::move(g));
}

/// d+1 unit vectors in R^d: a regular simplex of k+1 vectors spanning the
/// first k coordinates (pairwise inner product -1/k) followed by the
/// remaining d-k standard basis vectors.
inline Configuration lifted_etf(int d, int k) {
  if (d < 1 || k < 1 || k > d)
    throw std::invalid_argument("lifted_etf requires 1 <= k <= d (got d=" +
                                std::to_string(d) + ", k=" +
                                std::to_string(k) + ")");
  Matrix X = Matrix::Zero(d + 1, d);
  // Centered basis vectors e_i - 1/(k+1) expressed in the Helmert basis of
  // the sum-zero hyperplane of R^{k+1}.
  const double scale = std::sqrt(static_cast<double>(k + 1) / k);
  for (int i = 0; i <= k; ++i) {
    for (int m = 1; m <= k; ++m) {
      const double norm = std::sqrt(static_cast<double>(m) * (m + 1));
      double h = 0.0;
      if (i < m)
        h = 1.0 / norm;
      else if (i == m)
        h = -static_cast<double>(m) / norm;
      X(i, m - 1) = scale * h;
    }
  }
  for (int i = k + 1; i <= d; ++i) X(i, i - 1) = 1.0;
  return Configuration::normalized(std::move(X));
}

/// Standard basis of R^d followed by m copies of e_1.
inline Configuration onb_plus_repeats(int d, int m) {
  if (d < 1 || m < 0)
    throw std::invalid_argument("onb_plus_repeats requires d >= 1, m >= 0");
  Matrix X = Matrix::Zero(d + m, d);
  X.topRows(d).setIdentity();
  for (int r = 0; r < m; ++r) X(d + r, 0) = 1.0;
  return Configuration(std::move(X));
}

/// Factors a Gram matrix of numerical rank <= d as X X^T with X having d
/// columns.
inline Configuration realize_gram(const GramMatrix& G, int d) {
  if (d < 1) throw std::invalid_argument("realize_gram requires d >= 1");
  const auto n = G.n();
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(G.entries());
  const Vector& vals = eig.eigenvalues();  // ascending
  const Eigen::Index keep = std::min<Eigen::Index>(d, n);
  for (Eigen::Index i = 0; i < n - keep; ++i) {
    if (vals(i) > tol::rank) {
      std::ostringstream msg;
      msg << "Gram matrix has numerical rank above " << d
          << " (eigenvalue " << vals(i) << " > " << tol::rank << ")";
      throw ValidationError(msg.str());
    }
  }
  Matrix X = Matrix::Zero(n, d);
  for (Eigen::Index c = 0; c < keep; ++c) {
    const Eigen::Index src = n - 1 - c;  // largest first
    X.col(c) = eig.eigenvectors().col(src) * std::sqrt(std::max(vals(src), 0.0));
  }
  return Configuration::normalized(std::move(X));
}

/// Eigenvector of the smallest eigenvalue, oriented so that its first
/// non-negligible coordinate is positive.
inline NullVector null_space_vector(const GramMatrix& G) {
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(G.entries());
  const double smallest = eig.eigenvalues()(0);
  if (smallest > tol::nullspace) {
    std::ostringstream msg;
    msg << "Gram matrix is numerically full rank (smallest eigenvalue "
        << smallest << ")";
    throw std::domain_error(msg.str());
  }
  Vector y = eig.eigenvectors().col(0).normalized();
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (std::abs(y(i)) > 1e-12) {
      if (y(i) < 0) y = -y;
      break;
    }
  }
  const double residual = (G.entries() * y).norm();
  return {std::move(y), residual};
}

/// Sorted off-diagonal |<x_i, x_j>| values, i < j. Invariant under a common
/// orthogonal map, per-vector sign flips and permutations.
inline std::vector<double> canonical_signature(const Configuration& X) {
  const Matrix g = X.vectors() * X.vectors().transpose();
  std::vector<double> sig;
  sig.reserve(static_cast<std::size_t>(X.n() * (X.n() - 1) / 2));
  for (Eigen::Index i = 0; i < X.n(); ++i)
    for (Eigen::Index j = i + 1; j < X.n(); ++j)
      sig.push_back(std::abs(g(i, j)));
  std::sort(sig.begin(), sig.end());
  return sig;
}

}  // namespace framepot
