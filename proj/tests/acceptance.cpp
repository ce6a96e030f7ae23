// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include "framepot/campaign.hpp"
#include "framepot/core.hpp"
#include "framepot/optimizer.hpp"
#include "framepot/potential.hpp"
#include "framepot/random.hpp"
#include "framepot/simplex.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace framepot;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int threads() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

Outcome closed_form_values() {
  double worst = 0.0;
  int cells = 0;
  for (int d = 2; d <= 8; ++d) {
    const RegimeTable t = regime_boundaries(d);
    for (int k = 1; k <= d; ++k) {
      const Configuration L = lifted_etf(d, k);
      for (double p : interior_samples(d, k, 20)) {
        const double got = frame_potential(L, PotentialParams(p));
        worst = std::max(worst, std::abs(got - (k + 1) * std::pow(k, 1.0 - p)));
        ++cells;
      }
    }
  }
  std::ostringstream s;
  s << cells << " evaluations, max abs error " << worst;
  return {worst <= 1e-10, s.str()};
}

Outcome optimizer_reproduction() {
  VerifyOptions o;
  o.dims = {2, 3, 4, 5};
  o.samples_per_regime = 5;
  o.include_boundaries = false;
  o.minimize.restarts = 100;
  o.minimize.threads = threads();
  const VerifyReport r = run_verification(o);
  double worst = 0.0;
  std::string failures;
  for (const CellResult& c : r.cells) {
    worst = std::max(worst, std::abs(c.rel_gap));
    if (!c.pass) {
      std::ostringstream f;
      f << " [d=" << c.d << " p=" << c.p << ": " << c.reason << "]";
      failures += f.str();
    }
  }
  std::ostringstream s;
  s << r.cells.size() << " cells, max |rel_gap| " << worst << failures;
  return {r.all_pass(), s.str()};
}

Outcome boundary_degeneracy() {
  VerifyOptions o;
  o.minimize.restarts = 100;
  o.minimize.threads = threads();
  double worst_tie = 0.0;
  double worst_gap = 0.0;
  int cells = 0;
  bool pass = true;
  std::string failures;
  for (int d = 2; d <= 6; ++d)
    for (int k = 1; k < d; ++k) {
      const CellResult c = verify_cell(d, regime_boundary(k), o);
      ++cells;
      worst_tie = std::max(worst_tie, c.boundary_tie);
      worst_gap = std::max(worst_gap, std::abs(c.rel_gap));
      if (!c.pass) {
        pass = false;
        failures += " [d=" + std::to_string(d) + " k=" + std::to_string(k) + ": " + c.reason + "]";
      }
    }
  std::ostringstream s;
  s << cells << " boundaries, max tie " << worst_tie << ", max |rel_gap| " << worst_gap
    << failures;
  return {pass, s.str()};
}

Outcome lemma_m_oracle() {
  int checks = 0;
  double worst = 0.0;
  bool pass = true;
  std::string failures;
  for (int d = 1; d <= 6; ++d) {
    std::vector<double> alphas{1.01, 1.1, 1.5, 2.0, 3.0};
    if (d > 1) alphas.push_back(1.0 + 1.0 / (d - 1));
    for (int k = 1; k < d; ++k) {
      const double a = alpha_threshold(k);
      alphas.insert(alphas.end(), {a - 0.01, a + 0.01, a});
    }
    for (double a : alphas) {
      const LemmaMCheck c = check_lemma_m(d, a);
      ++checks;
      worst = std::max(worst, c.value_gap);
      bool ok = c.agree;
      bool at_threshold = false;
      for (int k = 1; k < d; ++k) at_threshold |= a == alpha_threshold(k);
      if (at_threshold) {
        ok = ok && c.analytic.points.size() == 2 &&
             std::abs(m_objective(c.analytic.points[0], a) -
                      m_objective(c.analytic.points[1], a)) <= 1e-12;
      }
      if (!ok) {
        pass = false;
        std::ostringstream f;
        f << " [d=" << d << " alpha=" << a << " gap=" << c.value_gap << "]";
        failures += f.str();
      }
    }
  }
  std::ostringstream s;
  s << checks << " (d, alpha) pairs, max value gap " << worst << failures;
  return {pass, s.str()};
}

Outcome bound_consistency() {
  double worst = 0.0;
  for (int d = 2; d <= 8; ++d) {
    const Configuration L = lifted_etf(d, d);
    const double fp2 = frame_potential(L, PotentialParams(2.0));
    worst = std::max({worst, std::abs(fp2 - sidelnikov_bound(d + 1, d, 1).value),
                      std::abs(fp2 - (d + 1.0) / d)});
    for (double p : {2.5, 3.0, 4.0, 7.0}) {
      const Bound eo = ehler_okoudjou_bound(d + 1, d, p);
      if (!eo.valid) return {false, "Ehler-Okoudjou bound flagged invalid for p > 2"};
      worst = std::max(worst, std::abs(frame_potential(L, PotentialParams(p)) - eo.value));
    }
    const Bound gl = glazyrin_bound(d + 1, d, 1.0);
    worst = std::max({worst, std::abs(gl.value - 2.0),
                      std::abs(theorem_min_value(d, 1.0).value - 2.0),
                      std::abs(frame_potential(lifted_etf(d, 1), PotentialParams(1.0)) - 2.0)});
  }
  std::ostringstream s;
  s << "max abs deviation " << worst;
  return {worst <= 1e-10, s.str()};
}

Outcome proof_chain() {
  auto rng = stream_rng(2024, 0);
  double worst = 0.0;
  int evaluations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = 2 + trial % 4;
    const Configuration X = random_configuration(d + 1, d, rng);
    for (double p : {1.2, 1.5, 1.9}) {
      worst = std::min(worst, verify_proof_chain(X, p).min_slack());
      ++evaluations;
    }
  }
  double loosest = 0.0;
  for (int d = 2; d <= 6; ++d)
    for (int k = 1; k <= d; ++k) {
      const RegimeTable t = regime_boundaries(d);
      const double lo = std::max(1.0, t.boundaries[k - 1]);
      const double hi = t.boundaries[k];
      if (!(lo < hi)) continue;
      for (int j = 1; j <= 4; ++j) {
        const double p = lo + j / 5.0 * (hi - lo);
        const ProofChainReport r = verify_proof_chain(lifted_etf(d, k), p);
        loosest = std::max(loosest, std::abs(r.max_slack()));
        loosest = std::max(loosest, std::abs(r.min_slack()));
      }
    }
  std::ostringstream s;
  s << evaluations << " random evaluations, min slack " << worst
    << "; max |slack| on lifted ETFs " << loosest;
  return {worst >= -1e-9 && loosest <= 1e-9, s.str()};
}

Outcome gradient_check() {
  auto rng = stream_rng(77, 0);
  const double eps = 1e-3;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 5;
    const double p = 0.3 + 1.6 * (trial / 19.0);
    const Configuration X = random_configuration(d + 1, d, rng);
    const SmoothedValue s = smoothed_fp_and_gradient(X, p, eps);
    const auto f = [&](const oracle::Rows& rows) {
      return oracle::smoothed_raw(rows, p, eps);
    };
    Matrix fd = from_rows(oracle::central_gradient(f, to_rows(X)));
    for (Eigen::Index i = 0; i < fd.rows(); ++i)
      fd.row(i) -= fd.row(i).dot(X.vectors().row(i)) * X.vectors().row(i);
    const double err = (s.gradient - fd).cwiseAbs().maxCoeff() / std::max(fd.cwiseAbs().maxCoeff(), 1e-300);
    worst = std::max(worst, err);
  }
  std::ostringstream s;
  s << "20 configurations, max relative error " << worst;
  return {worst <= 1e-5, s.str()};
}

Outcome unimodality() {
  auto rng = stream_rng(4242, 0);
  std::exponential_distribution<double> gap(1.0);
  int bad = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const double a = 1.0 + gap(rng);
    bool descending = false;
    for (int x = 2; x <= 12; ++x) {
      const bool up = comparison_H(x + 1, a) > comparison_H(x, a);
      if (descending && up) {
        ++bad;
        break;
      }
      if (!up) descending = true;
    }
  }
  return {bad == 0, "100 alphas, " + std::to_string(bad) + " non-unimodal sequences"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"closed-form lifted-ETF potentials", closed_form_values},
      {"optimizer reproduces the minimum, d = 2..5", optimizer_reproduction},
      {"boundary degeneracy at p_k, d <= 6", boundary_degeneracy},
      {"simplex maximizers match the brute-force oracle", lemma_m_oracle},
      {"bound consistency (p = 1, 2, > 2)", bound_consistency},
      {"lower-bound chain slacks", proof_chain},
      {"smoothed gradient vs finite differences", gradient_check},
      {"unimodality of H(2..13)", unimodality},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::printf("criterion %zu: %s  %s (%s; %.1f s)\n", i + 1, o.pass ? "PASS" : "FAIL",
                criteria[i].name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
