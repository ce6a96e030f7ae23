#pragma once

// JSON and CSV encodings of configurations, Gram matrices, regime tables
// and optimizer reports.

#include "framepot/core.hpp"
#include "framepot/optimizer.hpp"
#include "framepot/potential.hpp"
#include "framepot/simplex.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace framepot::io {

using json = nlohmann::json;

inline json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

namespace detail {

inline Matrix matrix_from_json(const json& rows, Eigen::Index n, Eigen::Index cols,
                               const char* what) {
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n)
    throw ValidationError(std::string(what) + " must be an array of " + std::to_string(n) +
                          " rows");
  Matrix m(n, cols);
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw ValidationError(std::string(what) + " row " + std::to_string(i) + " must have " +
                            std::to_string(cols) + " entries");
    for (Eigen::Index j = 0; j < cols; ++j) {
      const json& v = row[static_cast<std::size_t>(j)];
      if (!v.is_number())
        throw ValidationError(std::string(what) + " entry (" + std::to_string(i) + "," +
                              std::to_string(j) + ") is not a number");
      m(i, j) = v.get<double>();
    }
  }
  return m;
}

inline int positive_int(const json& obj, const char* key) {
  if (!obj.contains(key) || !obj[key].is_number_integer() || obj[key].get<long long>() < 1)
    throw ValidationError(std::string("field '") + key + "' must be a positive integer");
  return obj[key].get<int>();
}

inline json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace detail

// {"d": int, "n": int, "vectors": [[...], ...]}, row-major.
inline json to_json(const Configuration& X) {
  return {{"d", X.dim()}, {"n", X.n()}, {"vectors", matrix_to_json(X.vectors())}};
}

inline Configuration configuration_from_json(const json& obj) {
  if (!obj.is_object()) throw ValidationError("configuration must be a JSON object");
  const int d = detail::positive_int(obj, "d");
  const int n = detail::positive_int(obj, "n");
  if (!obj.contains("vectors")) throw ValidationError("configuration lacks 'vectors'");
  return Configuration(detail::matrix_from_json(obj["vectors"], n, d, "vectors"));
}

// {"n": int, "entries": [[...], ...]}.
inline json to_json(const GramMatrix& G) {
  return {{"n", G.n()}, {"entries", matrix_to_json(G.entries())}};
}

inline GramMatrix gram_from_json(const json& obj) {
  if (!obj.is_object()) throw ValidationError("Gram matrix must be a JSON object");
  const int n = detail::positive_int(obj, "n");
  if (!obj.contains("entries")) throw ValidationError("Gram matrix lacks 'entries'");
  return GramMatrix(detail::matrix_from_json(obj["entries"], n, n, "entries"));
}

/// One vector per line, comma separated, written with round-trip precision.
inline std::string to_csv(const Configuration& X) {
  std::ostringstream out;
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < X.n(); ++i) {
    for (Eigen::Index j = 0; j < X.dim(); ++j) out << (j ? "," : "") << X.vectors()(i, j);
    out << '\n';
  }
  return out.str();
}

inline Configuration configuration_from_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(field, &used));
        if (field.find_first_not_of(" \t\r", used) != std::string::npos)
          throw std::invalid_argument(field);
      } catch (const std::exception&) {
        throw ValidationError("CSV line " + std::to_string(rows.size() + 1) +
                              ": not a number: '" + field + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ValidationError("CSV line " + std::to_string(rows.size() + 1) +
                            " has a different length");
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows.front().empty()) throw ValidationError("CSV configuration is empty");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return Configuration(std::move(m));
}

inline bool is_csv_path(const std::string& path) {
  return path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

/// Loads a configuration, choosing CSV for *.csv paths and JSON otherwise.
inline Configuration load_configuration(const std::string& path) {
  const std::string text = read_file(path);
  return is_csv_path(path) ? configuration_from_csv(text)
                           : configuration_from_json(detail::parse(text));
}

inline void save_configuration(const std::string& path, const Configuration& X) {
  write_file(path, is_csv_path(path) ? to_csv(X) : to_json(X).dump(2) + "\n");
}

/// JSON has no infinity; a_0 is written as null.
inline json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json to_json(const RegimeTable& t) {
  json a = json::array();
  for (double v : t.alpha_thresholds) a.push_back(finite_or_null(v));
  return {{"d", t.d}, {"boundaries", t.boundaries}, {"alpha_thresholds", a}};
}

/// Rows of the minimizer table: one per interior regime and one per
/// boundary p_k with its two minimizers.
inline json regime_rows(int d) {
  const RegimeTable t = regime_boundaries(d);
  json rows = json::array();
  for (int k = 1; k <= d; ++k) {
    rows.push_back({{"kind", "interior"},
                    {"k", k},
                    {"p_interval", json::array({t.boundaries[k - 1], t.boundaries[k]})},
                    {"minimizers", json::array({"L_" + std::to_string(k)})},
                    {"value_formula", "(k+1)*k^(1-p) with k=" + std::to_string(k)},
                    {"alpha_interval",
                     json::array({finite_or_null(t.alpha_thresholds[k]),
                                  finite_or_null(t.alpha_thresholds[k - 1])})}});
    if (k < d) {
      rows.push_back({{"kind", "boundary"},
                      {"k", k},
                      {"p", t.boundaries[k]},
                      {"minimizers", json::array({"L_" + std::to_string(k), "L_" + std::to_string(k + 1)})},
                      {"value", lifted_etf_potential(k, t.boundaries[k])},
                      {"alpha", t.alpha_thresholds[k]}});
    }
  }
  return rows;
}

/// Aligned-column text rendering of regime_rows, 12 significant digits.
inline std::string regime_table_text(int d) {
  const json rows = regime_rows(d);
  std::ostringstream out;
  out << std::setprecision(12);
  const auto num = [](const json& v) {
    std::ostringstream s;
    s << std::setprecision(12);
    if (v.is_null())
      s << "inf";
    else
      s << v.get<double>();
    return s.str();
  };
  out << std::left << std::setw(10) << "kind" << std::setw(4) << "k" << std::setw(34)
      << "p" << std::setw(14) << "minimizer" << std::setw(22) << "value"
      << "alpha\n";
  for (const auto& r : rows) {
    const std::string kind = r["kind"];
    const int k = r["k"];
    out << std::setw(10) << kind << std::setw(4) << k;
    if (kind == "interior") {
      out << std::setw(34)
          << ("(" + num(r["p_interval"][0]) + ", " + num(r["p_interval"][1]) + ")")
          << std::setw(14) << r["minimizers"][0].get<std::string>() << std::setw(22)
          << "(k+1)k^(1-p)"
          << ("(" + num(r["alpha_interval"][0]) + ", " + num(r["alpha_interval"][1]) + ")");
    } else {
      out << std::setw(34) << num(r["p"]) << std::setw(14)
          << (r["minimizers"][0].get<std::string>() + "," +
              r["minimizers"][1].get<std::string>())
          << std::setw(22) << num(r["value"]) << num(r["alpha"]);
    }
    out << '\n';
  }
  return out.str();
}

/// {family, d, k, p, value, bound_name}; k is null when not applicable.
inline json bound_record(const std::string& family, int d, std::optional<int> k, double p,
                         double value, const std::string& bound_name) {
  return {{"family", family},
          {"d", d},
          {"k", k ? json(*k) : json(nullptr)},
          {"p", p},
          {"value", value},
          {"bound_name", bound_name}};
}

inline json optional_int(const std::optional<int>& v) { return v ? json(*v) : json(nullptr); }

inline json to_json(const OptimizationReport& r) {
  return {{"d", r.d},
          {"p", r.p},
          {"value", r.value},
          {"theoretical", r.theoretical},
          {"rel_gap", r.rel_gap},
          {"classified_as", optional_int(r.classified_as)},
          {"restarts_converged", r.restarts_converged},
          {"iterations_total", r.iterations_total},
          {"descent_value", r.descent_value},
          {"descent_classified_as", optional_int(r.descent_classified_as)},
          {"best_restart", r.best_restart},
          {"used_known_construction", r.used_known_construction},
          {"best", to_json(r.best)}};
}

inline json to_json(const SimplexPoint& z) { return vector_to_json(z.coords()); }

inline json to_json(const ProofChainReport& r) {
  return {{"p", r.p},
          {"q", r.q},
          {"alpha", r.alpha},
          {"null_vector", vector_to_json(r.y.coords)},
          {"null_residual", r.y.residual},
          {"weighted_sum", r.weighted_sum},
          {"potential", r.potential},
          {"m_at_null", r.m_at_null},
          {"holder_rhs", r.holder_rhs},
          {"null_bound", r.null_bound},
          {"theorem_bound", r.theorem_bound},
          {"slacks", r.slacks}};
}

}  // namespace framepot::io
