#pragma once

// Maximization of M_alpha(z) = (sum z_i^a)^2 - sum z_i^{2a} over the
// probability simplex, alpha > 1: the closed-form maximizers, the
// two-level restriction and its auxiliary polynomials, and a brute-force
// oracle that does not use any of the closed forms.

#include "framepot/core.hpp"
#include "framepot/potential.hpp"
#include "framepot/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace framepot {

inline constexpr double simplex_sum_tol = 1e-12;
inline constexpr double threshold_tol = 1e-12;

namespace detail {
inline void require_alpha(double alpha) {
  if (!(alpha > 1.0) || !std::isfinite(alpha))
    throw std::invalid_argument("alpha must be a finite value > 1");
}
}  // namespace detail

/// Nonnegative coordinates summing to one.
class SimplexPoint {
 public:
  explicit SimplexPoint(Vector z) : z_(std::move(z)) {
    if (z_.size() < 1) throw std::invalid_argument("empty simplex point");
    if ((z_.array() < 0.0).any())
      throw std::invalid_argument("simplex point has a negative coordinate");
    if (std::abs(z_.sum() - 1.0) > simplex_sum_tol)
      throw std::invalid_argument("simplex point does not sum to 1");
  }

  /// Mass 1/count on the first `count` of `size` coordinates.
  static SimplexPoint uniform(int size, int count) {
    if (count < 1 || count > size)
      throw std::invalid_argument("uniform support out of range");
    Vector z = Vector::Zero(size);
    z.head(count).setConstant(1.0 / count);
    return SimplexPoint(std::move(z));
  }

  const Vector& coords() const noexcept { return z_; }
  Eigen::Index size() const noexcept { return z_.size(); }

 private:
  Vector z_;
};

/// (t repeated m1 times, s repeated d+1-m1 times) with m1 t + (d+1-m1) s = 1.
struct TwoLevelPoint {
  int m1;
  double t;
  double s;

  static TwoLevelPoint make(int d, int m1, double t) {
    if (d < 1) throw std::invalid_argument("two-level point needs d >= 1");
    if (m1 < 1 || 2 * m1 > d + 1)
      throw std::invalid_argument("m1 must lie in [1, (d+1)/2]");
    if (t < 0.0 || t > 1.0 / m1 + 1e-15)
      throw std::invalid_argument("t must lie in [0, 1/m1]");
    t = std::min(t, 1.0 / m1);
    const double s = std::max(0.0, (1.0 - m1 * t) / (d + 1 - m1));
    return {m1, t, s};
  }

  SimplexPoint expand(int d) const {
    Vector z(d + 1);
    z.head(m1).setConstant(t);
    z.tail(d + 1 - m1).setConstant(s);
    z /= z.sum();
    return SimplexPoint(std::move(z));
  }
};

/// M_alpha without validating the simplex constraint.
inline double m_value(const Vector& z, double alpha) {
  double sum = 0.0;
  double sum_sq = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double w = z(i) > 0.0 ? std::pow(z(i), alpha) : 0.0;
    sum += w;
    sum_sq += w * w;
  }
  return sum * sum - sum_sq;
}

inline double m_objective(const SimplexPoint& z, double alpha) {
  detail::require_alpha(alpha);
  return m_value(z.coords(), alpha);
}

/// f_{m1}(t) = (m1 t^a + m2 s^a)^2 - (m1 t^{2a} + m2 s^{2a}).
inline double f_restriction(const TwoLevelPoint& tl, double alpha, int d) {
  detail::require_alpha(alpha);
  if (tl.m1 < 1 || 2 * tl.m1 > d + 1)
    throw std::invalid_argument("m1 must lie in [1, (d+1)/2]");
  const int m2 = d + 1 - tl.m1;
  const double ta = tl.t > 0.0 ? std::pow(tl.t, alpha) : 0.0;
  const double sa = tl.s > 0.0 ? std::pow(tl.s, alpha) : 0.0;
  const double lin = tl.m1 * ta + m2 * sa;
  return lin * lin - (tl.m1 * ta * ta + m2 * sa * sa);
}

/// h(x) = (m2-1) x^{4a-2} - m2 x^{2a} + m1 x^{2a-2} - (m1-1).
inline double h_poly(double x, int m1, int m2, double alpha) {
  detail::require_alpha(alpha);
  return (m2 - 1) * std::pow(x, 4 * alpha - 2) - m2 * std::pow(x, 2 * alpha) +
         m1 * std::pow(x, 2 * alpha - 2) - (m1 - 1);
}

/// h1 with h'(x) = h1(x) x^{2a-3}.
inline double h1_poly(double x, int m1, int m2, double alpha) {
  detail::require_alpha(alpha);
  return (4 * alpha - 2) * (m2 - 1) * std::pow(x, 2 * alpha) -
         2 * alpha * m2 * x * x + (2 * alpha - 2) * m1;
}

/// Unique minimizer x0 of h1 on (0, inf).
inline double h1_min_location(int m1, int m2, double alpha) {
  detail::require_alpha(alpha);
  if (m2 < 2) throw std::invalid_argument("h1_min_location requires m2 >= 2");
  (void)m1;
  return std::pow(m2 / ((2 * alpha - 1) * (m2 - 1)), 1.0 / (2 * alpha - 2));
}

/// Zeros of h1 (equivalently critical points of h) on (0, inf) and the
/// sign of h' on each interval they delimit.
struct HRoots {
  std::vector<double> roots;
  std::vector<int> derivative_signs;  // roots.size() + 1 entries
};

namespace detail {
template <class F>
double bisect(F&& f, double lo, double hi, double width = 1e-12) {
  double flo = f(lo);
  for (int it = 0; it < 200 && hi - lo > width; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}
}  // namespace detail

/// h1 decreases on (0, x0) and increases on (x0, inf) with h1(0) > 0, so it
/// has zero, one (double) or two roots; each is bracketed on its monotone
/// branch and bisected.
inline HRoots find_h_roots(int m1, int m2, double alpha) {
  detail::require_alpha(alpha);
  if (m2 < 2) throw std::invalid_argument("find_h_roots requires m2 >= 2");
  const auto h1 = [&](double x) { return h1_poly(x, m1, m2, alpha); };
  const double x0 = h1_min_location(m1, m2, alpha);
  const double scale = std::max({(4 * alpha - 2) * (m2 - 1) * std::pow(x0, 2 * alpha),
                                 2 * alpha * m2 * x0 * x0, (2 * alpha - 2) * m1});
  const double at_min = h1(x0);
  if (at_min > 1e-12 * scale) return {{}, {+1}};
  if (at_min >= -1e-12 * scale) return {{x0}, {+1, +1}};
  const double left = detail::bisect(h1, 0.0, x0);
  double hi = 2.0 * x0;
  while (h1(hi) <= 0.0) hi *= 2.0;
  const double right = detail::bisect(h1, x0, hi, 1e-12 * std::max(1.0, x0));
  return {{left, right}, {+1, -1, +1}};
}

/// H(x) = x^{1-2a} (x - 1); H(k) is M_alpha at the uniform point on k
/// coordinates.
inline double comparison_H(double x, double alpha) {
  detail::require_alpha(alpha);
  if (!(x > 0.0)) throw std::invalid_argument("comparison_H requires x > 0");
  return std::pow(x, 1.0 - 2.0 * alpha) * (x - 1.0);
}

/// Support size and uniformity of a simplex point, used to compare
/// maximizers up to permutation.
struct SimplexSignature {
  int support;
  bool uniform;
  bool operator==(const SimplexSignature&) const = default;
};

inline SimplexSignature simplex_signature(const Vector& z, double tol = 1e-6) {
  int support = 0;
  for (Eigen::Index i = 0; i < z.size(); ++i)
    if (z(i) > tol) ++support;
  bool uniform = support > 0;
  for (Eigen::Index i = 0; i < z.size(); ++i)
    if (z(i) > tol && std::abs(z(i) - 1.0 / support) > std::sqrt(tol))
      uniform = false;
  return {support, uniform};
}

struct AnalyticMaximum {
  std::vector<SimplexPoint> points;  // one, or two at a threshold a_k
  double value;
  int k;  // the first maximizer is uniform on k+1 coordinates
};

/// Closed-form maximizers: uniform on k+1 coordinates for alpha in
/// (a_k, a_{k-1}); both uniform-on-(k+1) and uniform-on-(k+2) at a_k.
inline AnalyticMaximum maximize_m_analytic(int d, double alpha) {
  detail::require_alpha(alpha);
  if (d < 1) throw std::invalid_argument("maximize_m_analytic requires d >= 1");
  const int size = d + 1;
  for (int k = 1; k < d; ++k) {
    if (std::abs(alpha - alpha_threshold(k)) <= threshold_tol) {
      return {{SimplexPoint::uniform(size, k + 1), SimplexPoint::uniform(size, k + 2)},
              comparison_H(k + 1, alpha),
              k};
    }
  }
  int k = d;
  for (int j = 1; j < d; ++j) {
    if (alpha > alpha_threshold(j)) {
      k = j;
      break;
    }
  }
  return {{SimplexPoint::uniform(size, k + 1)}, comparison_H(k + 1, alpha), k};
}

/// Euclidean projection onto the probability simplex (sort-based).
inline Vector project_to_simplex(const Vector& v) {
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumsum += u[j];
    const double candidate = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - candidate > 0.0) theta = candidate;
  }
  Vector z = (v.array() - theta).max(0.0).matrix();
  return z / z.sum();
}

struct BruteMaximum {
  Vector point;
  double value;
};

namespace detail {

inline Vector m_gradient(const Vector& z, double alpha) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i)
    sum += z(i) > 0.0 ? std::pow(z(i), alpha) : 0.0;
  Vector g(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (z(i) > 0.0) {
      const double za = std::pow(z(i), alpha);
      g(i) = 2.0 * alpha * std::pow(z(i), alpha - 1.0) * (sum - za);
    } else {
      g(i) = 0.0;
    }
  }
  return g;
}

/// Projected gradient ascent with a backtracking step halved from 0.1.
inline BruteMaximum ascend(Vector z, double alpha) {
  double value = m_value(z, alpha);
  for (int it = 0; it < 10000; ++it) {
    const Vector g = m_gradient(z, alpha);
    double step = 0.1;
    bool moved = false;
    Vector next;
    double next_value = value;
    while (step > 1e-16) {
      next = project_to_simplex(z + step * g);
      next_value = m_value(next, alpha);
      if (next_value > value) {
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
    const double change = (next - z).norm() / std::max(1.0, z.norm());
    z = std::move(next);
    value = next_value;
    if (change < 1e-12) break;
  }
  return {std::move(z), value};
}

/// Golden-section maximization of a unimodal f on [lo, hi].
template <class F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, double tol) {
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - ratio * (b - a), e = a + ratio * (b - a);
  double fc = f(c), fe = f(e);
  while (b - a > tol) {
    if (fc < fe) {
      a = c;
      c = e;
      fc = fe;
      e = a + ratio * (b - a);
      fe = f(e);
    } else {
      b = e;
      e = c;
      fe = fc;
      c = b - ratio * (b - a);
      fc = f(c);
    }
  }
  std::pair<double, double> best{a, f(a)};
  for (double x : {b, c, e}) {
    const double fx = f(x);
    if (fx > best.second) best = {x, fx};
  }
  return best;
}

}  // namespace detail

/// Independent oracle: exhaustive scan of every two-level family (grid of
/// grid_n values of t, refined by golden section) plus projected-gradient
/// ascents from `restarts` uniformly random simplex points.
inline BruteMaximum maximize_m_brute(int d, double alpha, int grid_n, int restarts,
                                     std::uint64_t seed = 0) {
  detail::require_alpha(alpha);
  if (d < 1) throw std::invalid_argument("maximize_m_brute requires d >= 1");
  if (grid_n < 50) throw std::invalid_argument("grid_n must be at least 50");
  if (restarts < 0) throw std::invalid_argument("restarts must be >= 0");

  BruteMaximum best{SimplexPoint::uniform(d + 1, 1).coords(), 0.0};
  const auto consider = [&](const Vector& z, double value) {
    if (value > best.value) best = {z, value};
  };

  for (int m1 = 1; 2 * m1 <= d + 1; ++m1) {
    const double t_max = 1.0 / m1;
    const auto f = [&](double t) {
      return f_restriction(TwoLevelPoint::make(d, m1, std::clamp(t, 0.0, t_max)), alpha, d);
    };
    int best_i = 0;
    double best_f = -1.0;
    for (int i = 0; i < grid_n; ++i) {
      const double fi = f(t_max * i / (grid_n - 1));
      if (fi > best_f) {
        best_f = fi;
        best_i = i;
      }
    }
    const double lo = t_max * std::max(best_i - 1, 0) / (grid_n - 1);
    const double hi = t_max * std::min(best_i + 1, grid_n - 1) / (grid_n - 1);
    auto [t, ft] = detail::golden_max(f, lo, hi, 1e-10);
    if (best_f >= ft) {
      t = t_max * best_i / (grid_n - 1);
      ft = best_f;
    }
    consider(TwoLevelPoint::make(d, m1, t).expand(d).coords(), ft);
  }

  for (int r = 0; r < restarts; ++r) {
    auto rng = stream_rng(seed, static_cast<std::uint64_t>(r));
    BruteMaximum local = detail::ascend(random_simplex_point(d + 1, rng), alpha);
    consider(local.point, local.value);
  }
  return best;
}

}  // namespace framepot
