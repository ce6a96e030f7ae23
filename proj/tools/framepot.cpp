// framepot: command-line front end for constructing unit-vector
// configurations, evaluating p-frame potentials and bounds, and running
// minimization and verification campaigns.

#include "framepot/campaign.hpp"
#include "framepot/core.hpp"
#include "framepot/io.hpp"
#include "framepot/optimizer.hpp"
#include "framepot/potential.hpp"
#include "framepot/simplex.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

using framepot::io::json;

constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kInternal = 1, kInvalidInput = 2, kVerificationFailed = 3 };

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

json run_record(const std::string& command, json parameters, json results) {
  return {{"command", command},
          {"parameters", std::move(parameters)},
          {"timestamp", utc_timestamp()},
          {"version", kVersion},
          {"results", std::move(results)}};
}

std::string fmt(double v) {
  std::ostringstream out;
  out << std::setprecision(12) << v;
  return out.str();
}

int thread_count() {
  int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* cap = std::getenv("FRAMEPOT_THREADS")) {
    const int c = std::atoi(cap);
    if (c >= 1) n = std::min(n, c);
  }
  return n;
}

/// Whether p is an even positive integer 2k (within 1e-12).
std::optional<int> even_exponent(double p) {
  const double half = p / 2.0;
  const double r = std::round(half);
  if (r >= 1.0 && std::abs(half - r) <= 1e-12) return static_cast<int>(r);
  return std::nullopt;
}

json bounds_for(int n, int d, double p) {
  json records = json::array();
  if (auto k = even_exponent(p)) {
    records.push_back(framepot::io::bound_record(
        "lower-bound", d, *k, p, framepot::sidelnikov_bound(n, d, *k).value, "sidelnikov"));
  }
  if (n >= d) {
    const auto eo = framepot::ehler_okoudjou_bound(n, d, p);
    json rec = framepot::io::bound_record("lower-bound", d, std::nullopt, p, eo.value,
                                          "ehler-okoudjou");
    rec["valid"] = eo.valid;
    records.push_back(rec);
  }
  if (p <= 2.0) {
    const auto gl = framepot::glazyrin_bound(n, d, p);
    json rec =
        framepot::io::bound_record("lower-bound", d, std::nullopt, p, gl.value, "glazyrin");
    rec["valid"] = gl.valid;
    records.push_back(rec);
  }
  if (n == d + 1 && d >= 2 && p > 0.0 && p < 2.0) {
    const auto tv = framepot::theorem_min_value(d, p);
    json rec = framepot::io::bound_record("lower-bound", d, tv.regime.k, p, tv.value,
                                          "theorem-minimum");
    rec["valid"] = true;
    rec["boundary"] = tv.regime.boundary;
    records.push_back(rec);
  }
  return records;
}

void print_bounds_text(std::ostream& out, const json& records) {
  for (const auto& r : records) {
    out << "  " << std::left << std::setw(18) << r["bound_name"].get<std::string>()
        << std::setw(22) << fmt(r["value"].get<double>());
    if (r.contains("valid")) out << (r["valid"].get<bool>() ? "valid" : "outside validity range");
    out << '\n';
  }
}

void emit(bool as_json, const json& record, const std::string& text) {
  if (as_json)
    std::cout << record.dump(2) << '\n';
  else
    std::cout << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-frame potentials of unit-vector configurations"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  bool as_json = false;

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate FP, coherence and bounds of a configuration");
  std::string eval_path;
  double eval_p = 2.0;
  eval->add_option("--config", eval_path, "Configuration file (.json or .csv)")->required();
  eval->add_option("--p", eval_p, "Exponent p > 0")->required();
  eval->add_flag("--json", as_json, "Machine-readable output");

  // construct
  auto* construct = app.add_subcommand("construct", "Write a lifted-ETF style configuration");
  std::string family;
  int con_d = 0, con_k = 0, con_m = 0;
  std::string con_out;
  construct->add_option("--family", family, "lifted-etf | onb-plus-repeats | simplex-etf")
      ->required()
      ->check(CLI::IsMember({"lifted-etf", "onb-plus-repeats", "simplex-etf"}));
  construct->add_option("--d", con_d, "Ambient dimension")->required();
  construct->add_option("--k", con_k, "Simplex block size parameter for lifted-etf");
  construct->add_option("--m", con_m, "Number of repeats for onb-plus-repeats");
  construct->add_option("--out", con_out, "Output path (.json or .csv)")->required();
  construct->add_flag("--json", as_json, "Machine-readable output");

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Lower bounds and lifted-ETF potentials");
  int b_d = 0, b_n = 0;
  double b_p = 2.0;
  bounds->add_option("--d", b_d, "Ambient dimension")->required();
  bounds->add_option("--n", b_n, "Number of vectors (default d+1)");
  bounds->add_option("--p", b_p, "Exponent p > 0")->required();
  bounds->add_flag("--json", as_json, "Machine-readable output");

  // regimes
  auto* regimes = app.add_subcommand("regimes", "Minimizer table for N = d+1");
  int r_d = 2;
  regimes->add_option("--d", r_d, "Ambient dimension (>= 2)")->required();
  regimes->add_flag("--json", as_json, "Machine-readable output");

  // minimize
  auto* minimize = app.add_subcommand("minimize", "Minimize FP over d+1 unit vectors in R^d");
  int m_d = 2;
  double m_p = 1.0;
  framepot::MinimizeOptions mopts;
  std::string json_out, config_out;
  bool no_known = false;
  minimize->add_option("--d", m_d, "Ambient dimension (>= 2)")->required();
  minimize->add_option("--p", m_p, "Exponent in (0, 2)")->required();
  minimize->add_option("--restarts", mopts.restarts, "Random restarts")->capture_default_str();
  minimize->add_option("--seed", mopts.seed, "Random seed")->capture_default_str();
  minimize->add_option("--max-iters", mopts.max_iters, "Iterations per restart")
      ->capture_default_str();
  minimize->add_option("--json-out", json_out, "Write the report JSON here");
  minimize->add_option("--config-out", config_out, "Write the best configuration here");
  minimize->add_flag("--no-known-construction", no_known,
                     "Do not include the predicted lifted ETF as a candidate");
  minimize->add_flag("--json", as_json, "Machine-readable output");

  // lemma-m
  auto* lemma = app.add_subcommand("lemma-m", "Compare closed-form and brute-force simplex maxima");
  int l_d = 1;
  double l_alpha = 0.0;
  int l_threshold = 0;
  int l_grid = 400, l_restarts = 20;
  std::uint64_t l_seed = 0;
  lemma->add_option("--d", l_d, "Simplex has d+1 coordinates")->required();
  auto* alpha_opt = lemma->add_option("--alpha", l_alpha, "Exponent alpha > 1");
  auto* thr_opt = lemma->add_option("--threshold", l_threshold,
                                    "Use alpha = a_k exactly for this k in 1..d-1");
  alpha_opt->excludes(thr_opt);
  lemma->add_option("--grid-n", l_grid, "Grid points per two-level family")->capture_default_str();
  lemma->add_option("--restarts", l_restarts, "Projected-gradient restarts")->capture_default_str();
  lemma->add_option("--seed", l_seed, "Random seed")->capture_default_str();
  lemma->add_flag("--json", as_json, "Machine-readable output");

  // verify
  auto* verify = app.add_subcommand("verify", "Minimization campaign against the closed forms");
  std::vector<int> v_dims{2, 3};
  framepot::VerifyOptions vopts;
  vopts.minimize.restarts = 100;
  bool sabotage = false;
  bool no_boundaries = false;
  verify->add_option("--d-list", v_dims, "Dimensions")->delimiter(',')->capture_default_str();
  verify->add_option("--samples", vopts.samples_per_regime, "Interior p samples per regime")
      ->capture_default_str();
  verify->add_option("--restarts", vopts.minimize.restarts, "Restarts per cell")
      ->capture_default_str();
  verify->add_option("--seed", vopts.minimize.seed, "Random seed")->capture_default_str();
  verify->add_option("--max-iters", vopts.minimize.max_iters, "Iterations per restart")
      ->capture_default_str();
  verify->add_flag("--no-boundaries", no_boundaries, "Skip the boundary exponents p_k");
  verify->add_flag("--sabotage", sabotage,
                   "Replace the closed-form minimum by a wrong formula (negative test)");
  verify->add_flag("--json", as_json, "Machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    if (*eval) {
      const framepot::Configuration X = framepot::io::load_configuration(eval_path);
      const framepot::PotentialParams pp(eval_p);
      const int n = static_cast<int>(X.n());
      const int d = static_cast<int>(X.dim());
      const double fp = framepot::frame_potential(X, pp);
      json results = {{"n", n}, {"d", d}, {"p", eval_p}, {"frame_potential", fp}};
      if (n >= 2) results["coherence"] = framepot::coherence(X);
      results["bounds"] = bounds_for(n, d, eval_p);
      if (n == d + 1) {
        const auto k = framepot::classify_minimizer(X, 1e-8);
        results["lifted_etf_k"] = framepot::io::optional_int(k);
      }
      std::ostringstream text;
      text << "N = " << n << ", d = " << d << ", p = " << fmt(eval_p) << '\n'
           << "frame potential  " << fmt(fp) << '\n';
      if (n >= 2) text << "coherence        " << fmt(results["coherence"].get<double>()) << '\n';
      text << "bounds:\n";
      print_bounds_text(text, results["bounds"]);
      emit(as_json, run_record("eval", {{"config", eval_path}, {"p", eval_p}}, results),
           text.str());
      return kOk;
    }

    if (*construct) {
      std::optional<framepot::Configuration> X;
      if (family == "lifted-etf") {
        if (construct->count("--k") == 0)
          throw std::invalid_argument("lifted-etf requires --k");
        X = framepot::lifted_etf(con_d, con_k);
      } else if (family == "simplex-etf") {
        X = framepot::lifted_etf(con_d, con_d);
      } else {
        X = framepot::onb_plus_repeats(con_d, con_m);
      }
      framepot::io::save_configuration(con_out, *X);
      const auto sig = framepot::canonical_signature(*X);
      json results = {{"path", con_out}, {"configuration", framepot::io::to_json(*X)},
                      {"signature", sig}};
      emit(as_json,
           run_record("construct",
                      {{"family", family}, {"d", con_d}, {"k", con_k}, {"m", con_m},
                       {"out", con_out}},
                      results),
           "wrote " + std::to_string(X->n()) + " vectors in R^" + std::to_string(X->dim()) +
               " to " + con_out + "\n");
      return kOk;
    }

    if (*bounds) {
      const int n = bounds->count("--n") ? b_n : b_d + 1;
      const framepot::PotentialParams pp(b_p);
      if (b_d < 1 || n < 1) throw std::invalid_argument("bounds requires d >= 1 and n >= 1");
      json records = bounds_for(n, b_d, b_p);
      if (n == b_d + 1) {
        for (int k = 1; k <= b_d; ++k)
          records.push_back(framepot::io::bound_record(
              "lifted-etf", b_d, k, b_p, framepot::frame_potential(framepot::lifted_etf(b_d, k), pp),
              "frame-potential"));
      }
      std::ostringstream text;
      text << "N = " << n << ", d = " << b_d << ", p = " << fmt(b_p) << '\n';
      for (const auto& r : records) {
        std::string name = r["bound_name"];
        if (r["family"] == "lifted-etf") name = "FP(L_" + std::to_string(r["k"].get<int>()) + ")";
        text << "  " << std::left << std::setw(18) << name << fmt(r["value"].get<double>());
        if (r.contains("valid") && !r["valid"].get<bool>()) text << "  (outside validity range)";
        text << '\n';
      }
      emit(as_json, run_record("bounds", {{"d", b_d}, {"n", n}, {"p", b_p}}, records), text.str());
      return kOk;
    }

    if (*regimes) {
      if (r_d < 2) throw std::invalid_argument("regimes requires d >= 2");
      json results = {{"table", framepot::io::to_json(framepot::regime_boundaries(r_d))},
                      {"rows", framepot::io::regime_rows(r_d)}};
      emit(as_json, run_record("regimes", {{"d", r_d}}, results),
           framepot::io::regime_table_text(r_d));
      return kOk;
    }

    if (*minimize) {
      mopts.threads = thread_count();
      mopts.include_known_construction = !no_known;
      const framepot::OptimizationReport rep = framepot::minimize_fp(m_d, m_p, mopts);
      const json results = framepot::io::to_json(rep);
      if (!json_out.empty()) framepot::io::write_file(json_out, results.dump(2) + "\n");
      if (!config_out.empty()) framepot::io::save_configuration(config_out, rep.best);
      std::ostringstream text;
      text << "d = " << m_d << ", p = " << fmt(m_p) << ", restarts = " << mopts.restarts << '\n'
           << "best value       " << fmt(rep.value) << '\n'
           << "theoretical      " << fmt(rep.theoretical) << '\n'
           << "relative gap     " << fmt(rep.rel_gap) << '\n'
           << "classified as    "
           << (rep.classified_as ? "L_" + std::to_string(*rep.classified_as) : "none") << '\n'
           << "descent value    " << fmt(rep.descent_value)
           << (rep.used_known_construction ? "  (known construction was better)" : "") << '\n'
           << "converged        " << rep.restarts_converged << "/" << mopts.restarts << '\n';
      emit(as_json,
           run_record("minimize",
                      {{"d", m_d}, {"p", m_p}, {"restarts", mopts.restarts},
                       {"seed", mopts.seed}, {"max_iters", mopts.max_iters},
                       {"known_construction", !no_known}},
                      results),
           text.str());
      return kOk;
    }

    if (*lemma) {
      double alpha = l_alpha;
      if (*thr_opt) {
        if (l_threshold < 1 || l_threshold >= l_d)
          throw std::invalid_argument("--threshold must lie in 1..d-1");
        alpha = framepot::alpha_threshold(l_threshold);
      } else if (!*alpha_opt) {
        throw std::invalid_argument("lemma-m requires --alpha or --threshold");
      }
      const auto check = framepot::check_lemma_m(l_d, alpha, l_grid, l_restarts, l_seed);
      json points = json::array();
      for (const auto& z : check.analytic.points) points.push_back(framepot::io::to_json(z));
      json results = {{"d", l_d},
                      {"alpha", alpha},
                      {"analytic", {{"points", points}, {"value", check.analytic.value}}},
                      {"brute",
                       {{"point", framepot::io::vector_to_json(check.brute.point)},
                        {"value", check.brute.value}}},
                      {"agree", check.agree}};
      std::ostringstream text;
      text << "d = " << l_d << ", alpha = " << fmt(alpha) << '\n'
           << "analytic maximum " << fmt(check.analytic.value) << " at "
           << check.analytic.points.size() << " point(s): uniform on";
      for (const auto& z : check.analytic.points)
        text << ' ' << framepot::simplex_signature(z.coords()).support;
      text << " coordinates\n"
           << "brute maximum    " << fmt(check.brute.value) << '\n'
           << "agree            " << (check.agree ? "yes" : "no") << '\n';
      emit(as_json,
           run_record("lemma-m",
                      {{"d", l_d}, {"alpha", alpha}, {"grid_n", l_grid},
                       {"restarts", l_restarts}, {"seed", l_seed}},
                      results),
           text.str());
      return check.agree ? kOk : kVerificationFailed;
    }

    if (*verify) {
      vopts.dims = v_dims;
      vopts.include_boundaries = !no_boundaries;
      vopts.minimize.threads = thread_count();
      if (sabotage) {
        vopts.theoretical = [](int d, double p) {
          const int k = framepot::theorem_min_value(d, p).regime.k;
          return std::pow(static_cast<double>(k), 2.0 - p);
        };
      }
      const framepot::VerifyReport report = framepot::run_verification(vopts);
      json cells = json::array();
      std::ostringstream text;
      for (const auto& c : report.cells) {
        cells.push_back({{"d", c.d},
                         {"p", c.p},
                         {"k", c.regime.k},
                         {"boundary", c.regime.boundary},
                         {"value", c.value},
                         {"theoretical", c.theoretical},
                         {"rel_gap", c.rel_gap},
                         {"classified_as", framepot::io::optional_int(c.classified_as)},
                         {"pass", c.pass},
                         {"reason", c.reason}});
        text << (c.pass ? "PASS" : "FAIL") << "  d=" << c.d << " p=" << std::left
             << std::setw(14) << fmt(c.p)
             << (c.regime.boundary ? " boundary k=" : " k=") << c.regime.k
             << " rel_gap=" << fmt(c.rel_gap);
        if (!c.pass) text << "  " << c.reason;
        text << '\n';
      }
      text << (report.all_pass() ? "all cells passed\n" : "verification FAILED\n");
      emit(as_json,
           run_record("verify",
                      {{"d_list", v_dims}, {"samples", vopts.samples_per_regime},
                       {"restarts", vopts.minimize.restarts}, {"seed", vopts.minimize.seed},
                       {"boundaries", vopts.include_boundaries}, {"sabotage", sabotage}},
                      {{"cells", cells}, {"all_pass", report.all_pass()}}),
           text.str());
      return report.all_pass() ? kOk : kVerificationFailed;
    }
  } catch (const framepot::ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}
