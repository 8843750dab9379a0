#pragma once

// JSON encodings of forms, curvature matrices and analysis reports.
//
//   form:      {"dim": 8, "degree": 2, "terms": [{"i": [1, 2], "c": 1.0}, ...]}
//   curvature: {"dim": 8, "N": 4, "entries": [{"a": 1, "b": 2, "form": {...}}, ...]}
//
// Index lists are 1-based and strictly increasing; repeated index sets (or
// repeated (a, b) entries) are summed on load. Missing terms and entries are zero.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdforms/curvature.hpp"
#include "sdforms/errors.hpp"
#include "sdforms/exterior.hpp"
#include "sdforms/selfdual.hpp"

namespace sdforms::io {

using json = nlohmann::json;

namespace detail {

inline const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw input_error(where + ": expected a JSON object");
  auto it = obj.find(key);
  if (it == obj.end()) throw input_error(where + ": missing field \"" + key + "\"");
  return *it;
}

inline int integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw input_error(where + ": expected an integer");
  return v.get<int>();
}

inline double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw input_error(where + ": expected a number");
  return v.get<double>();
}

}  // namespace detail

inline json to_json(const KForm& f) {
  json terms = json::array();
  for (std::size_t p = 0; p < f.size(); ++p) {
    const double c = f.coeffs()[p];
    if (c == 0.0) continue;
    const MultiIndex mi = f.basis_index(p);
    const auto idx = mi.indices();
    terms.push_back({{"i", std::vector<int>(idx.begin(), idx.end())}, {"c", c}});
  }
  return {{"dim", f.dim()}, {"degree", f.degree()}, {"terms", terms}};
}

/// `where` is a JSON-pointer-like location used in diagnostics.
inline KForm form_from_json(const json& j, const std::string& where = "") {
  const int dim = detail::integer(detail::field(j, "dim", where), where + "/dim");
  if (!is_valid_dim(dim)) {
    throw input_error(where + "/dim: dimension must be even and in [4, 12], got " + std::to_string(dim));
  }
  const int degree = detail::integer(detail::field(j, "degree", where), where + "/degree");
  if (degree < 0 || degree > dim) throw input_error(where + "/degree: out of range [0, " + std::to_string(dim) + "]");
  const json& terms = detail::field(j, "terms", where);
  if (!terms.is_array()) throw input_error(where + "/terms: expected an array");

  KForm f(dim, degree);
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const std::string at = where + "/terms/" + std::to_string(t);
    const json& idx = detail::field(terms[t], "i", at);
    if (!idx.is_array()) throw input_error(at + "/i: expected an array of indices");
    std::vector<int> labels;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const int label = detail::integer(idx[k], at + "/i/" + std::to_string(k));
      if (label < 1 || label > dim) {
        throw input_error(at + "/i/" + std::to_string(k) + ": index " + std::to_string(label) + " outside [1, " +
                          std::to_string(dim) + "]");
      }
      if (!labels.empty() && label <= labels.back()) throw input_error(at + "/i: indices must be strictly increasing");
      labels.push_back(label);
    }
    if (static_cast<int>(labels.size()) != degree) {
      throw input_error(at + "/i: expected " + std::to_string(degree) + " indices, got " + std::to_string(labels.size()));
    }
    f.add(MultiIndex(std::move(labels)), detail::number(detail::field(terms[t], "c", at), at + "/c"));
  }
  return f;
}

inline json to_json(const CurvatureMatrix& f) {
  json entries = json::array();
  for (const auto& [a, b] : f.pairs()) {
    const KForm& e = f.upper(a, b);
    if (e.is_zero()) continue;
    entries.push_back({{"a", a}, {"b", b}, {"form", to_json(e)}});
  }
  return {{"dim", f.dim()}, {"N", f.fiber()}, {"entries", entries}};
}

inline CurvatureMatrix curvature_from_json(const json& j) {
  const int dim = detail::integer(detail::field(j, "dim", ""), "/dim");
  if (!is_valid_dim(dim)) throw input_error("/dim: dimension must be even and in [4, 12], got " + std::to_string(dim));
  const int n = detail::integer(detail::field(j, "N", ""), "/N");
  if (n < 2) throw input_error("/N: fiber size must be at least 2");
  const json& entries = detail::field(j, "entries", "");
  if (!entries.is_array()) throw input_error("/entries: expected an array");

  CurvatureMatrix f(dim, n);
  for (std::size_t e = 0; e < entries.size(); ++e) {
    const std::string at = "/entries/" + std::to_string(e);
    const int a = detail::integer(detail::field(entries[e], "a", at), at + "/a");
    const int b = detail::integer(detail::field(entries[e], "b", at), at + "/b");
    if (a < 1 || b > n || a >= b) {
      throw input_error(at + ": need 1 <= a < b <= N, got a = " + std::to_string(a) + ", b = " + std::to_string(b));
    }
    const KForm form = form_from_json(detail::field(entries[e], "form", at), at + "/form");
    if (form.dim() != dim || form.degree() != 2) throw input_error(at + "/form: expected a 2-form of dimension " + std::to_string(dim));
    f.set(a, b, f.upper(a, b) + form);
  }
  return f;
}

/// Parses a file; syntax errors carry nlohmann's line/column diagnostics.
inline json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error(path + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw input_error(path + ": " + e.what());
  }
}

inline void save_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw input_error(path + ": cannot write file");
  out << j.dump(2) << '\n';
}

inline json to_json(const SelfDualityReport& r) {
  return {{"classification", std::string(to_string(r.classification))},
          {"lambdas", r.lambdas},
          {"lambda_spread", r.lambda_spread},
          {"lambda_mean_sq", r.lambda_mean_sq},
          {"matrix_residual", r.matrix_residual},
          {"pfaffian", r.pfaffian}};
}

inline json to_json(const TrautmanReport& r) {
  return {{"k_fit", r.k_fit},
          {"k_theory", r.k_theory},
          {"residual", r.residual},
          {"holds", r.holds},
          {"anti_branch", r.anti_branch}};
}

inline json to_json(const GapReport& r) {
  json j = {{"g1", r.g1}, {"g1_scale", r.g1_scale}};
  j["g2"] = r.g2 ? json(*r.g2) : json(nullptr);
  if (r.g2) j["g2_scale"] = r.g2_scale;
  return j;
}

inline json to_json(const BoundReport& r) {
  if (!r.applicable) return {{"name", r.name}, {"applicable", false}};
  return {{"name", r.name}, {"applicable", true},        {"lhs", r.lhs},
          {"rhs", r.rhs},   {"slack", r.slack},          {"saturated", r.saturated}};
}

inline json to_json(const CurvatureInvariants& inv) {
  json j = {{"f_norm_sq", inv.f_norm_sq},
            {"sigma2_norm_sq", inv.sigma2_norm_sq},
            {"sigma4_norm", inv.sigma4.norm()},
            {"phi", inv.phi},
            {"ortho_residual", inv.ortho_residual}};
  j["sigma2_sq_top"] = inv.sigma2_sq_top ? json(*inv.sigma2_sq_top) : json(nullptr);
  j["sigma4_top"] = inv.sigma4_top ? json(*inv.sigma4_top) : json(nullptr);
  return j;
}

}  // namespace sdforms::io
