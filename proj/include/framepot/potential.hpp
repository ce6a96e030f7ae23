#pragma once

// p-frame potential, classical lower bounds, and the regime structure of
// the minimal potential for N = d+1 vectors.

#include "framepot/core.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace framepot {

/// Inner products at or below this magnitude contribute nothing to the
/// potential, for every p.
inline constexpr double zero_inner_product = 1e-15;
inline constexpr double boundary_tol = 1e-12;

struct PotentialParams {
  double p;

  explicit PotentialParams(double exponent) : p(exponent) {
    if (!(exponent > 0.0) || !std::isfinite(exponent))
      throw std::invalid_argument("potential exponent p must be positive");
  }
};

/// |t|^p with the structural-zero convention.
inline double abs_pow(double t, double p) {
  const double a = std::abs(t);
  return a <= zero_inner_product ? 0.0 : std::pow(a, p);
}

/// Sum over ordered pairs i != j of |<x_i, x_j>|^p.
inline double frame_potential(const Configuration& X, PotentialParams params) {
  const Matrix g = X.vectors() * X.vectors().transpose();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < X.n(); ++i)
    for (Eigen::Index j = i + 1; j < X.n(); ++j) sum += abs_pow(g(i, j), params.p);
  return 2.0 * sum;
}

inline double coherence(const Configuration& X) {
  if (X.n() < 2) throw std::invalid_argument("coherence needs N >= 2");
  const Matrix g = X.vectors() * X.vectors().transpose();
  double mu = 0.0;
  for (Eigen::Index i = 0; i < X.n(); ++i)
    for (Eigen::Index j = i + 1; j < X.n(); ++j) mu = std::max(mu, std::abs(g(i, j)));
  return std::min(mu, 1.0);
}

/// A lower bound value and whether the exponent lies in the range where
/// the bound is a theorem.
struct Bound {
  double value;
  bool valid;
};

/// Lower bound on FP_{2k}: N^2 (1*3*...*(2k-1)) / (d(d+2)...(d+2k-2)) - N.
inline Bound sidelnikov_bound(int n, int d, int k) {
  if (n < 1 || d < 1 || k < 1)
    throw std::invalid_argument("sidelnikov_bound requires N, d, k >= 1");
  double ratio = 1.0;
  for (int i = 0; i < k; ++i)
    ratio *= static_cast<double>(2 * i + 1) / static_cast<double>(d + 2 * i);
  const double nn = static_cast<double>(n);
  return {nn * nn * ratio - nn, true};
}

/// N(N-1) ((N-d)/(d(N-1)))^{p/2}; a theorem for p > 2.
inline Bound ehler_okoudjou_bound(int n, int d, double p) {
  if (n < d || d < 1)
    throw std::invalid_argument("ehler_okoudjou_bound requires N >= d >= 1");
  if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
  if (n == 1) return {0.0, p > 2.0};
  const double nn = n;
  const double base = (nn - d) / (d * (nn - 1.0));
  return {nn * (nn - 1.0) * std::pow(base, p / 2.0), p > 2.0};
}

/// 2(N-d) / (p^{p/2} (2-p)^{(2-p)/2}); a theorem for 1 <= p <= 2. The
/// factor (2-p)^{(2-p)/2} is 1 at p = 2.
inline Bound glazyrin_bound(int n, int d, double p) {
  if (!(p > 0.0) || p > 2.0)
    throw std::invalid_argument("glazyrin_bound is defined for 0 < p <= 2");
  const double q = 2.0 - p;
  const double tail = q == 0.0 ? 1.0 : std::pow(q, q / 2.0);
  return {2.0 * (n - d) / (std::pow(p, p / 2.0) * tail), p >= 1.0};
}

/// p_k = ln((k+2)/k) / ln((k+1)/k).
inline double regime_boundary(int k) {
  return std::log1p(2.0 / k) / std::log1p(1.0 / k);
}

/// a_k = (1/2) ln((k+2)/k) / ln((k+2)/(k+1)).
inline double alpha_threshold(int k) {
  return 0.5 * std::log1p(2.0 / k) / std::log1p(1.0 / (k + 1));
}

/// Boundaries p_0 = 0 < p_1 < ... < p_{d-1} < p_d = 2 and the dual
/// thresholds a_0 = inf > a_1 > ... > a_d = 1.
struct RegimeTable {
  int d;
  std::vector<double> boundaries;
  std::vector<double> alpha_thresholds;
};

inline RegimeTable regime_boundaries(int d) {
  if (d < 1) throw std::invalid_argument("regime_boundaries requires d >= 1");
  RegimeTable t{d, std::vector<double>(d + 1), std::vector<double>(d + 1)};
  t.boundaries[0] = 0.0;
  t.boundaries[d] = 2.0;
  t.alpha_thresholds[0] = std::numeric_limits<double>::infinity();
  t.alpha_thresholds[d] = 1.0;
  for (int k = 1; k < d; ++k) {
    t.boundaries[k] = regime_boundary(k);
    t.alpha_thresholds[k] = alpha_threshold(k);
  }
  return t;
}

/// Either the interior regime k, i.e. p in (p_{k-1}, p_k), or the boundary
/// p = p_k shared by regimes k and k+1.
struct Regime {
  int k;
  bool boundary;

  int upper() const noexcept { return boundary ? k + 1 : k; }
  bool operator==(const Regime&) const = default;
};

inline Regime regime_index(int d, double p) {
  if (!(p > 0.0 && p < 2.0))
    throw std::invalid_argument("regime_index requires 0 < p < 2");
  if (d < 1) throw std::invalid_argument("regime_index requires d >= 1");
  for (int k = 1; k < d; ++k)
    if (std::abs(p - regime_boundary(k)) <= boundary_tol) return {k, true};
  for (int k = 1; k < d; ++k)
    if (p < regime_boundary(k)) return {k, false};
  return {d, false};
}

/// (k+1) k^{1-p}: the potential of the lifted ETF with a (k+1)-simplex block.
inline double lifted_etf_potential(int k, double p) {
  return (k + 1) * std::pow(static_cast<double>(k), 1.0 - p);
}

struct TheoremValue {
  Regime regime;
  double value;
};

/// Minimum of FP_{p,d+1,d} over all d+1 unit vectors in R^d, 0 < p < 2.
inline TheoremValue theorem_min_value(int d, double p) {
  if (d < 2) throw std::invalid_argument("theorem_min_value requires d >= 2");
  const Regime r = regime_index(d, p);
  return {r, lifted_etf_potential(r.k, p)};
}

/// alpha = q/2 for the Hoelder conjugate q = p/(p-1).
inline double alpha_of_p(double p) {
  if (!(p > 1.0 && p < 2.0))
    throw std::invalid_argument("alpha_of_p requires 1 < p < 2");
  return 0.5 + 0.5 / (p - 1.0);
}

}  // namespace framepot
