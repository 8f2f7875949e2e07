#pragma once

// Run configuration.  A run is described by one JSON document:
//
//   {
//     "weight":     { "preset": "jacobi", "alpha": 0.5, "beta": 0.5 }
//                   or an explicit factored form (see below),
//     "nmax":       6,
//     "precision":  "double" | "double-double"   (default "double"),
//     "points":     [ -0.7, [0.5, 0.6], ... ],
//     "tolerances": { "biorthogonality": 1e-10, ... }
//   }
//
// The explicit weight form names the factor data directly:
//
//   { "N": 2, "name": "custom",
//     "A_left": mat, "B_left": mat, "E_left": mat, "W0_left": mat,
//     "H_left": [mat, ...],            (polynomial coefficients, ascending)
//     ...and the same keys with _right }
//
// where mat is N rows of N entries and every entry is a number or a
// [re, im] pair.  The schema is strict: unknown keys anywhere, malformed
// values, out-of-range depths and tolerance keys outside the identity
// catalog are all ConfigInvalid.  Weight data that fails the structural
// invariants (integrability, commuting exponent blocks, invertible
// factors) is also reported as ConfigInvalid: the document, not the
// arithmetic, is at fault.

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mbop/presets.hpp"
#include "mbop/report.hpp"

namespace mbop {

struct WeightSpec {
  std::string preset;  // empty when the factored form is given
  std::optional<double> alpha, beta, c;
  int N = 0;
  std::string name = "custom";
  std::optional<Mat<double>> AL, BL, EL, W0L, AR, BR, ER, W0R;
  std::optional<MatPoly<double>> HL, HR;

  bool is_preset() const { return !preset.empty(); }
};

enum class Precision { double_only, double_double };

inline std::string precision_label(Precision p) {
  return p == Precision::double_only ? "double" : "double-double";
}

struct RunConfig {
  WeightSpec weight;
  int nmax = 0;
  Precision precision = Precision::double_only;
  std::vector<cplx<double>> points;
  std::map<std::string, double> tolerances;
  std::string command;  // filled by the driver
  std::string hash;     // fnv1a over the raw document bytes
};

inline std::string config_hash(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char b[32];
  std::snprintf(b, sizeof b, "fnv1a:%016llx", (unsigned long long)h);
  return b;
}

namespace detail {

using json = nlohmann::json;

[[noreturn]] inline void badcfg(const std::string& msg) {
  fail(ErrorCode::ConfigInvalid, "config: " + msg);
}

inline void expect_keys(const json& o, const char* where,
                        std::initializer_list<const char*> allowed) {
  for (auto it = o.begin(); it != o.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) known = known || it.key() == k;
    if (!known)
      badcfg(std::string(where) + ": unknown key '" + it.key() + "'");
  }
}

inline double number_at(const json& v, const std::string& what) {
  if (!v.is_number()) badcfg(what + " must be a number");
  return v.get<double>();
}

inline cplx<double> complex_at(const json& v, const std::string& what) {
  if (v.is_number()) return cplx<double>(v.get<double>());
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return cplx<double>(v[0].get<double>(), v[1].get<double>());
  badcfg(what + " must be a number or a [re, im] pair");
}

inline Mat<double> matrix_at(const json& v, int N, const std::string& what) {
  if (!v.is_array() || int(v.size()) != N)
    badcfg(what + " must be an array of " + std::to_string(N) + " rows");
  Mat<double> M(N, N);
  for (int i = 0; i < N; ++i) {
    const json& row = v[size_t(i)];
    if (!row.is_array() || int(row.size()) != N)
      badcfg(what + " row " + std::to_string(i) + " must hold " +
             std::to_string(N) + " entries");
    for (int j = 0; j < N; ++j)
      M(i, j) = complex_at(row[size_t(j)], what + " entry (" +
                                               std::to_string(i) + "," +
                                               std::to_string(j) + ")");
  }
  return M;
}

inline MatPoly<double> poly_at(const json& v, int N, const std::string& what) {
  if (!v.is_array() || v.empty())
    badcfg(what + " must be a non-empty array of coefficient matrices");
  std::vector<Mat<double>> coeffs;
  for (size_t k = 0; k < v.size(); ++k)
    coeffs.push_back(
        matrix_at(v[k], N, what + " coefficient " + std::to_string(k)));
  return MatPoly<double>(std::move(coeffs));
}

inline WeightSpec parse_weight(const json& o) {
  WeightSpec spec;
  if (!o.is_object()) badcfg("'weight' must be an object");
  if (o.contains("preset")) {
    expect_keys(o, "weight", {"preset", "alpha", "beta", "c"});
    if (!o["preset"].is_string()) badcfg("'preset' must be a string");
    spec.preset = o["preset"].get<std::string>();
    static const std::map<std::string, int> params = {
        {"legendre", 0},   {"jacobi", 2},       {"jacobi-sym", 2},
        {"jacobi-left", 2}, {"jacobi-exp", 3},  {"blockdiag", 0},
        {"nilpotent", 0},  {"noncommuting", 0}, {"irregular", 0}};
    auto it = params.find(spec.preset);
    if (it == params.end()) badcfg("unknown preset '" + spec.preset + "'");
    if (o.contains("alpha")) spec.alpha = number_at(o["alpha"], "'alpha'");
    if (o.contains("beta")) spec.beta = number_at(o["beta"], "'beta'");
    if (o.contains("c")) spec.c = number_at(o["c"], "'c'");
    if (it->second == 0 && (spec.alpha || spec.beta || spec.c))
      badcfg("preset '" + spec.preset + "' takes no parameters");
    if (it->second == 2 && spec.c)
      badcfg("preset '" + spec.preset + "' takes no 'c'");
    return spec;
  }
  expect_keys(o, "weight",
              {"N", "name", "A_left", "B_left", "E_left", "W0_left", "H_left",
               "A_right", "B_right", "E_right", "W0_right", "H_right"});
  if (!o.contains("N") || !o["N"].is_number_integer())
    badcfg("explicit weight needs an integer 'N'");
  spec.N = o["N"].get<int>();
  if (spec.N < 1 || spec.N > 8) badcfg("'N' must be in 1..8");
  if (o.contains("name")) {
    if (!o["name"].is_string()) badcfg("'name' must be a string");
    spec.name = o["name"].get<std::string>();
  }
  auto mat = [&](const char* key) -> std::optional<Mat<double>> {
    if (!o.contains(key)) return std::nullopt;
    return matrix_at(o[key], spec.N, std::string("'") + key + "'");
  };
  spec.AL = mat("A_left"), spec.BL = mat("B_left"), spec.EL = mat("E_left");
  spec.W0L = mat("W0_left");
  spec.AR = mat("A_right"), spec.BR = mat("B_right"), spec.ER = mat("E_right");
  spec.W0R = mat("W0_right");
  if (o.contains("H_left")) spec.HL = poly_at(o["H_left"], spec.N, "'H_left'");
  if (o.contains("H_right"))
    spec.HR = poly_at(o["H_right"], spec.N, "'H_right'");
  return spec;
}

template <class R>
inline Mat<R> promote_mat(const Mat<double>& A) {
  Mat<R> B(A.rows, A.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j)
      B(i, j) = cplx<R>(real_traits<R>::from_double(A(i, j).re),
                        real_traits<R>::from_double(A(i, j).im));
  return B;
}

template <class R>
inline MatPoly<R> promote_poly(const MatPoly<double>& P) {
  std::vector<Mat<R>> coeffs;
  for (int k = 0; k <= P.degree(); ++k)
    coeffs.push_back(promote_mat<R>(P.at(k)));
  return MatPoly<R>(std::move(coeffs));
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
  detail::json doc;
  try {
    doc = detail::json::parse(text);
  } catch (const std::exception& e) {
    detail::badcfg(std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) detail::badcfg("top level must be an object");
  detail::expect_keys(doc, "top level",
                      {"weight", "nmax", "precision", "points", "tolerances"});
  RunConfig cfg;
  cfg.hash = config_hash(text);
  if (!doc.contains("weight")) detail::badcfg("'weight' is required");
  cfg.weight = detail::parse_weight(doc["weight"]);
  if (!doc.contains("nmax") || !doc["nmax"].is_number_integer())
    detail::badcfg("'nmax' is required and must be an integer");
  cfg.nmax = doc["nmax"].get<int>();
  if (cfg.nmax < 1 || cfg.nmax > 64)
    detail::badcfg("'nmax' must be in 1..64");
  if (doc.contains("precision")) {
    const detail::json& pv = doc["precision"];
    if (!pv.is_string()) detail::badcfg("'precision' must be a string");
    std::string p = pv.get<std::string>();
    if (p == "double")
      cfg.precision = Precision::double_only;
    else if (p == "double-double")
      cfg.precision = Precision::double_double;
    else
      detail::badcfg("'precision' must be \"double\" or \"double-double\"");
  }
  if (doc.contains("points")) {
    const detail::json& pts = doc["points"];
    if (!pts.is_array()) detail::badcfg("'points' must be an array");
    for (size_t i = 0; i < pts.size(); ++i)
      cfg.points.push_back(detail::complex_at(
          pts[i], "'points' entry " + std::to_string(i)));
  }
  if (doc.contains("tolerances")) {
    const detail::json& to = doc["tolerances"];
    if (!to.is_object()) detail::badcfg("'tolerances' must be an object");
    const auto& catalog = identity_catalog();
    for (auto it = to.begin(); it != to.end(); ++it) {
      if (std::find(catalog.begin(), catalog.end(), it.key()) ==
          catalog.end())
        detail::badcfg("unknown tolerance key '" + it.key() +
                       "' (keys follow the identity catalog)");
      double v = detail::number_at(it.value(), "tolerance '" + it.key() + "'");
      if (!(v > 0.0)) detail::badcfg("tolerance '" + it.key() +
                                     "' must be positive");
      cfg.tolerances[it.key()] = v;
    }
  }
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) detail::badcfg("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

// Builds the weight at the requested arithmetic.  Structural rejections
// (integrability, commutation, invertibility, polynomial-factor checks)
// surface as ConfigInvalid: they indict the document.
template <class R>
inline Weight<R> realize_weight(const WeightSpec& spec) {
  try {
    if (spec.is_preset()) {
      double a = spec.alpha.value_or(0.5), b = spec.beta.value_or(0.5);
      if (spec.preset == "jacobi") return make_jacobi<R>(a, b);
      if (spec.preset == "jacobi-sym") return make_jacobi_sym<R>(a, b);
      if (spec.preset == "jacobi-left") return make_jacobi_left<R>(a, b);
      if (spec.preset == "jacobi-exp")
        return make_jacobi_exp<R>(spec.alpha.value_or(0.0),
                                  spec.beta.value_or(0.0),
                                  spec.c.value_or(1.0));
      return preset_weight<R>(spec.preset);
    }
    Weight<R> w = Weight<R>::neutral(spec.N, spec.name);
    if (spec.AL) w.AL = detail::promote_mat<R>(*spec.AL);
    if (spec.BL) w.BL = detail::promote_mat<R>(*spec.BL);
    if (spec.EL) w.EL = detail::promote_mat<R>(*spec.EL);
    if (spec.W0L) w.W0L = detail::promote_mat<R>(*spec.W0L);
    if (spec.AR) w.AR = detail::promote_mat<R>(*spec.AR);
    if (spec.BR) w.BR = detail::promote_mat<R>(*spec.BR);
    if (spec.ER) w.ER = detail::promote_mat<R>(*spec.ER);
    if (spec.W0R) w.W0R = detail::promote_mat<R>(*spec.W0R);
    if (spec.HL) w.HL = detail::promote_poly<R>(*spec.HL);
    if (spec.HR) w.HR = detail::promote_poly<R>(*spec.HR);
    validate_weight(w);
    return w;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigInvalid) throw;
    fail(ErrorCode::ConfigInvalid, std::string("weight rejected: ") + e.what());
  }
}

}  // namespace mbop
