#pragma once

// Numerical minimization of the p-frame potential over d+1 unit vectors in
// R^d, classification of minimizers against the lifted-ETF family, and the
// null-vector/Hoelder lower-bound chain evaluated on concrete
// configurations.

#include "framepot/core.hpp"
#include "framepot/potential.hpp"
#include "framepot/random.hpp"
#include "framepot/simplex.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

namespace framepot {

struct MinimizeOptions {
  int restarts = 50;
  int max_iters = 20000;
  double smoothing_eps = 1e-2;
  double eps_decay = 0.5;
  double eps_floor = 1e-9;
  int eps_interval = 200;  // iterations between decays
  double step_init = 0.1;
  double grad_tol = 1e-9;
  double armijo_c = 1e-4;
  std::uint64_t seed = 0;
  int threads = 1;
  bool polish = true;
  // Evaluate the lifted ETF predicted for (d, p) as an extra candidate.
  bool include_known_construction = true;
  // For p below this exponent each restart first descends on the potential
  // at this exponent and warm-starts the target descent from the result.
  // Set to 0 to disable.
  double continuation_exponent = 1.0;

  void validate() const {
    if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
    if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
    if (!(smoothing_eps > 0.0)) throw std::invalid_argument("smoothing_eps must be > 0");
    if (!(eps_decay > 0.0 && eps_decay < 1.0))
      throw std::invalid_argument("eps_decay must lie in (0, 1)");
    if (!(eps_floor > 0.0)) throw std::invalid_argument("eps_floor must be > 0");
    if (eps_interval < 1) throw std::invalid_argument("eps_interval must be >= 1");
    if (!(step_init > 0.0)) throw std::invalid_argument("step_init must be > 0");
    if (!(grad_tol >= 0.0)) throw std::invalid_argument("grad_tol must be >= 0");
    if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  }
};

struct OptimizationReport {
  int d = 0;
  double p = 0.0;
  Configuration best = onb_plus_repeats(1, 0);
  double value = 0.0;
  double theoretical = 0.0;
  double rel_gap = 0.0;
  std::optional<int> classified_as;
  int restarts_converged = 0;
  long long iterations_total = 0;
  // Best result of the descents alone, before the known construction is
  // considered.
  double descent_value = 0.0;
  std::optional<int> descent_classified_as;
  int best_restart = -1;  // -1 when the known construction won
  bool used_known_construction = false;
};

struct SmoothedValue {
  double value;
  Matrix gradient;  // rows are tangent to the sphere at each x_i
};

namespace detail {

/// Smoothed objective sum_{i != j} [(g_ij^2 + eps^2)^{p/2} - eps^p] and its
/// Riemannian gradient. With eps = 0 this is exactly the p-frame potential.
inline double smoothed_eval(const Matrix& X, double p, double eps, Matrix* grad) {
  const Eigen::Index n = X.rows();
  const Matrix g = X * X.transpose();
  const double offset = eps > 0.0 ? std::pow(eps, p) : 0.0;
  const double eps2 = eps * eps;
  double sum = 0.0;
  if (grad) grad->setZero(n, X.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double t = g(i, j);
      double coef = 0.0;  // d term / d t
      if (eps > 0.0) {
        const double r = t * t + eps2;
        const double rp = std::pow(r, 0.5 * p);
        sum += rp - offset;
        coef = p * t * rp / r;
      } else if (std::abs(t) > zero_inner_product) {
        const double a = std::pow(std::abs(t), p);
        sum += a;
        coef = p * a / t;
      }
      if (grad && coef != 0.0) {
        // Both ordered pairs (i,j) and (j,i) depend on t.
        grad->row(i) += 2.0 * coef * X.row(j);
        grad->row(j) += 2.0 * coef * X.row(i);
      }
    }
  }
  if (grad) {
    for (Eigen::Index i = 0; i < n; ++i)
      grad->row(i) -= grad->row(i).dot(X.row(i)) * X.row(i);
  }
  return 2.0 * sum;
}

inline void normalize_rows(Matrix& X) {
  for (Eigen::Index i = 0; i < X.rows(); ++i) X.row(i).normalize();
}

}  // namespace detail

inline SmoothedValue smoothed_fp_and_gradient(const Configuration& X, double p, double eps) {
  if (!(p > 0.0 && p <= 2.0))
    throw std::invalid_argument("smoothed potential requires 0 < p <= 2");
  if (!(eps >= 0.0)) throw std::invalid_argument("smoothing eps must be >= 0");
  SmoothedValue out{0.0, Matrix()};
  out.value = detail::smoothed_eval(X.vectors(), p, eps, &out.gradient);
  return out;
}

/// Per-iteration record of the descent, for diagnostics and tests.
struct DescentStep {
  int iteration;
  double eps;
  double before;
  double after;
};

struct DescentResult {
  Matrix X;
  int iterations = 0;
  bool converged = false;
};

/// Riemannian gradient descent on the product of spheres: Armijo
/// backtracking over the retraction "step, then renormalize rows", with the
/// smoothing parameter annealed geometrically down to its floor.
inline DescentResult descend(Matrix X, double p, const MinimizeOptions& opts,
                             std::vector<DescentStep>* trace = nullptr) {
  DescentResult res;
  double eps = opts.smoothing_eps;
  double step = opts.step_init;
  Matrix grad;
  Matrix trial;
  double value = detail::smoothed_eval(X, p, eps, &grad);
  double window_start = value;
  int it = 0;
  for (; it < opts.max_iters; ++it) {
    if (it > 0 && it % opts.eps_interval == 0) {
      const bool at_floor = eps <= opts.eps_floor;
      // A full window at the floor without measurable progress.
      if (at_floor && window_start - value <= 1e-15 * std::max(1.0, std::abs(value))) {
        res.converged = true;
        break;
      }
      eps = std::max(eps * opts.eps_decay, opts.eps_floor);
      value = detail::smoothed_eval(X, p, eps, &grad);
      window_start = value;
    }
    const double g2 = grad.squaredNorm();
    if (eps <= opts.eps_floor && std::sqrt(g2) <= opts.grad_tol) {
      res.converged = true;
      break;
    }
    bool accepted = false;
    double trial_value = value;
    while (step > 1e-20) {
      trial = X - step * grad;
      detail::normalize_rows(trial);
      trial_value = detail::smoothed_eval(trial, p, eps, nullptr);
      if (trial_value <= value - opts.armijo_c * step * g2) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // No descent direction at machine precision; move to the next eps.
      if (eps <= opts.eps_floor) {
        res.converged = true;
        break;
      }
      step = opts.step_init;
      it = (it / opts.eps_interval + 1) * opts.eps_interval - 1;
      continue;
    }
    if (trace) trace->push_back({it, eps, value, trial_value});
    X.swap(trial);
    value = detail::smoothed_eval(X, p, eps, &grad);
    step = std::min(2.0 * step, 1.0);
  }
  res.iterations = it;
  res.X = std::move(X);
  return res;
}

/// Newton projection onto the set of configurations in which every pair
/// with |<x_i, x_j>| < active_tol is exactly orthogonal. Returns nullopt
/// when the projection does not converge.
inline std::optional<Matrix> polish_orthogonality(const Matrix& X0, double active_tol) {
  const Eigen::Index n = X0.rows();
  const Eigen::Index d = X0.cols();
  std::vector<std::pair<Eigen::Index, Eigen::Index>> active;
  const Matrix g0 = X0 * X0.transpose();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (std::abs(g0(i, j)) < active_tol) active.emplace_back(i, j);
  if (active.empty()) return std::nullopt;

  const Eigen::Index m = static_cast<Eigen::Index>(active.size()) + n;
  Matrix X = X0;
  for (int it = 0; it < 50; ++it) {
    Vector c(m);
    Matrix J = Matrix::Zero(m, n * d);
    for (std::size_t a = 0; a < active.size(); ++a) {
      const auto [i, j] = active[a];
      c(a) = X.row(i).dot(X.row(j));
      J.block(a, i * d, 1, d) = X.row(j);
      J.block(a, j * d, 1, d) = X.row(i);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index r = static_cast<Eigen::Index>(active.size()) + i;
      c(r) = 0.5 * (X.row(i).squaredNorm() - 1.0);
      J.block(r, i * d, 1, d) = X.row(i);
    }
    if (c.cwiseAbs().maxCoeff() <= 1e-17) break;
    const Vector delta = J.completeOrthogonalDecomposition().solve(-c);
    for (Eigen::Index i = 0; i < n; ++i)
      X.row(i) += delta.segment(i * d, d).transpose();
    if (!X.allFinite()) return std::nullopt;
  }
  detail::normalize_rows(X);
  const Matrix g = X * X.transpose();
  for (const auto& [i, j] : active)
    if (std::abs(g(i, j)) > 1e-14) return std::nullopt;
  return X;
}

/// Returns k when the off-diagonal |Gram| entries match the lifted ETF
/// pattern: exactly k(k+1)/2 entries within tol of 1/k forming a clique on
/// k+1 indices, and every other entry below tol.
inline std::optional<int> classify_minimizer(const Configuration& X, double tol) {
  const Eigen::Index n = X.n();
  const int d = static_cast<int>(X.dim());
  if (n != d + 1) return std::nullopt;
  const Matrix g = (X.vectors() * X.vectors().transpose()).cwiseAbs();
  for (int k = 1; k <= d; ++k) {
    const double target = 1.0 / k;
    int matched = 0;
    bool others_small = true;
    std::vector<bool> touched(static_cast<std::size_t>(n), false);
    for (Eigen::Index i = 0; i < n && others_small; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        if (std::abs(g(i, j) - target) <= tol) {
          ++matched;
          touched[static_cast<std::size_t>(i)] = touched[static_cast<std::size_t>(j)] = true;
        } else if (g(i, j) >= tol) {
          others_small = false;
          break;
        }
      }
    }
    const auto vertices = std::count(touched.begin(), touched.end(), true);
    if (others_small && matched == k * (k + 1) / 2 && vertices == k + 1) return k;
  }
  return std::nullopt;
}

namespace detail {

struct RestartOutcome {
  Matrix X;
  double value;
  int iterations;
  bool converged;
};

inline RestartOutcome run_restart(int d, double p, const MinimizeOptions& opts, int index) {
  auto rng = stream_rng(opts.seed, static_cast<std::uint64_t>(index));
  const Configuration start = random_configuration(d + 1, d, rng);
  Matrix X = start.vectors();
  int warm_iterations = 0;
  if (p < opts.continuation_exponent) {
    DescentResult warm = descend(std::move(X), opts.continuation_exponent, opts);
    X = std::move(warm.X);
    warm_iterations = warm.iterations;
  }
  DescentResult res = descend(std::move(X), p, opts);
  res.iterations += warm_iterations;
  RestartOutcome out{res.X, smoothed_eval(res.X, p, 0.0, nullptr), res.iterations,
                     res.converged};
  if (opts.polish) {
    for (double active_tol : {1e-6, 1e-4, 1e-3, 1e-2}) {
      if (auto polished = polish_orthogonality(res.X, active_tol)) {
        const double v = smoothed_eval(*polished, p, 0.0, nullptr);
        if (v < out.value) {
          out.value = v;
          out.X = std::move(*polished);
        }
      }
    }
  }
  return out;
}

}  // namespace detail

inline double relative_gap(double value, double theoretical) {
  return (value - theoretical) / std::max(theoretical, 1e-300);
}

/// Minimizes FP_{p,d+1,d} by independent descents from uniformly random
/// starts. The reported best is the minimum over restarts (lowest index on
/// ties) and, optionally, the lifted ETF predicted for (d, p).
inline OptimizationReport minimize_fp(int d, double p, const MinimizeOptions& opts) {
  if (d < 2) throw std::invalid_argument("minimize_fp requires d >= 2");
  if (!(p > 0.0 && p < 2.0)) throw std::invalid_argument("minimize_fp requires 0 < p < 2");
  opts.validate();

  std::vector<detail::RestartOutcome> outcomes(static_cast<std::size_t>(opts.restarts));
  const int threads = std::min(opts.threads, opts.restarts);
  if (threads <= 1) {
    for (int r = 0; r < opts.restarts; ++r)
      outcomes[static_cast<std::size_t>(r)] = detail::run_restart(d, p, opts, r);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (int r = w; r < opts.restarts; r += threads)
          outcomes[static_cast<std::size_t>(r)] = detail::run_restart(d, p, opts, r);
      });
    }
    for (auto& t : pool) t.join();
  }

  OptimizationReport report;
  report.d = d;
  report.p = p;
  int best = 0;
  for (int r = 0; r < opts.restarts; ++r) {
    const auto& o = outcomes[static_cast<std::size_t>(r)];
    report.iterations_total += o.iterations;
    if (o.converged) ++report.restarts_converged;
    if (o.value < outcomes[static_cast<std::size_t>(best)].value) best = r;
  }
  const TheoremValue theory = theorem_min_value(d, p);
  report.theoretical = theory.value;
  report.best = Configuration::normalized(outcomes[static_cast<std::size_t>(best)].X);
  report.value = frame_potential(report.best, PotentialParams(p));
  report.best_restart = best;
  report.descent_value = report.value;
  report.descent_classified_as = classify_minimizer(report.best, 1e-6);

  if (opts.include_known_construction) {
    Configuration known = lifted_etf(d, theory.regime.k);
    const double known_value = frame_potential(known, PotentialParams(p));
    if (known_value < report.value) {
      report.best = std::move(known);
      report.value = known_value;
      report.best_restart = -1;
      report.used_known_construction = true;
    }
  }
  report.classified_as = report.used_known_construction ? std::optional<int>(theory.regime.k)
                                                        : report.descent_classified_as;
  report.rel_gap = relative_gap(report.value, report.theoretical);
  return report;
}

/// Terms of the lower-bound chain built from the unit null vector y of the
/// Gram matrix:
///   1 <= S := sum_{i!=j} |g_ij||y_i||y_j|
///     <= FP^{1/p} (sum_{i!=j} |y_i|^q |y_j|^q)^{1/q}
/// hence FP >= M_alpha(z)^{-p/q} >= (max M_alpha)^{-p/q} = (k+1) k^{1-p}
/// with z_i = y_i^2, q = p/(p-1), alpha = q/2.
struct ProofChainReport {
  NullVector y;
  double p = 0.0;
  double q = 0.0;
  double alpha = 0.0;
  double weighted_sum = 0.0;    // S
  double potential = 0.0;       // FP
  double m_at_null = 0.0;       // M_alpha(z)
  double holder_rhs = 0.0;
  double null_bound = 0.0;      // M_alpha(z)^{-p/q}
  double theorem_bound = 0.0;   // (max M_alpha)^{-p/q}
  // weighted_sum - 1, holder_rhs - weighted_sum, potential - null_bound,
  // null_bound - theorem_bound.
  std::array<double, 4> slacks{};

  double min_slack() const { return *std::min_element(slacks.begin(), slacks.end()); }
  double max_slack() const { return *std::max_element(slacks.begin(), slacks.end()); }
};

inline ProofChainReport verify_proof_chain(const Configuration& X, double p) {
  if (X.n() != X.dim() + 1)
    throw std::invalid_argument("proof chain requires N = d+1");
  if (!(p > 1.0 && p < 2.0)) throw std::invalid_argument("proof chain requires 1 < p < 2");
  const int d = static_cast<int>(X.dim());
  const GramMatrix G = gram(X);

  ProofChainReport r;
  r.y = null_space_vector(G);
  r.p = p;
  r.q = p / (p - 1.0);
  r.alpha = alpha_of_p(p);
  r.potential = frame_potential(X, PotentialParams(p));

  const Vector& y = r.y.coords;
  double powered = 0.0;
  for (Eigen::Index i = 0; i < X.n(); ++i) {
    for (Eigen::Index j = 0; j < X.n(); ++j) {
      if (i == j) continue;
      r.weighted_sum += std::abs(G(i, j)) * std::abs(y(i)) * std::abs(y(j));
      powered += std::pow(std::abs(y(i)) * std::abs(y(j)), r.q);
    }
  }
  const Vector z = y.cwiseAbs2();
  r.m_at_null = m_value(z, r.alpha);
  r.holder_rhs = std::pow(r.potential, 1.0 / p) * std::pow(powered, 1.0 / r.q);
  r.null_bound = std::pow(r.m_at_null, -p / r.q);
  r.theorem_bound = std::pow(maximize_m_analytic(d, r.alpha).value, -p / r.q);
  r.slacks = {r.weighted_sum - 1.0, r.holder_rhs - r.weighted_sum, r.potential - r.null_bound,
              r.null_bound - r.theorem_bound};
  return r;
}

}  // namespace framepot
