#pragma once

/// \file
/// Declarative manifold spec files (versioned JSON) and their compilation
/// into a ManifoldBundle.
///
/// {
///   "schema_version": 1,
///   "label": "cp2",
///   "dimension": 2,
///   "potential": "log(1 + abs2(z1) + abs2(z2))",
///   "toric": false,                      // if true, x_i = log(abs2(z_i)) are bound
///   "domain": {"box": [[lo, hi], ...],   // 2n intervals, (x1, y1, x2, y2, ...)
///              "constraints": ["..."]},  // admitted iff re(expr) > 0 for each
///   "map": {"components": ["conj(z1)", "conj(z2)"], "involution": true},
///   "locus": {"components": ["t1", "t2"], "box": [[lo, hi], ...]},
///   "c1_sign": "positive",
///   "assumed_hypotheses": [],
///   "tolerances": {"tol_sym": 1e-6, "tol_eig": 1e-5, "tol_const": 1e-5}
/// }
///
/// "map", "locus" and "tolerances" are optional.

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "kreal/model/bundle.hpp"
#include "kreal/model/expression.hpp"

namespace kreal {

inline constexpr int kSpecSchemaVersion = 1;

class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Interval = std::pair<double, double>;

struct LocusSpec {
  std::vector<std::string> components;
  std::vector<Interval> box;
};

struct MapSpec {
  std::vector<std::string> components;
  bool involution = false;
};

struct ManifoldSpec {
  int schema_version = kSpecSchemaVersion;
  std::string label;
  int dimension = 0;
  std::string potential;
  bool toric = false;
  std::vector<Interval> domain_box;
  std::vector<std::string> constraints;
  std::optional<MapSpec> map;
  std::optional<LocusSpec> locus;
  C1Sign c1_sign = C1Sign::positive;
  std::vector<std::string> assumed_hypotheses;
  std::optional<Tolerances> tolerances;
};

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::ordered_json to_json(const ManifoldSpec& s) {
  using nlohmann::ordered_json;
  auto box = [](const std::vector<Interval>& b) {
    ordered_json a = ordered_json::array();
    for (const auto& [lo, hi] : b) a.push_back({lo, hi});
    return a;
  };
  ordered_json j;
  j["schema_version"] = s.schema_version;
  j["label"] = s.label;
  j["dimension"] = s.dimension;
  j["potential"] = s.potential;
  j["toric"] = s.toric;
  j["domain"] = {{"box", box(s.domain_box)}, {"constraints", s.constraints}};
  if (s.map) j["map"] = {{"components", s.map->components}, {"involution", s.map->involution}};
  if (s.locus) j["locus"] = {{"components", s.locus->components}, {"box", box(s.locus->box)}};
  j["c1_sign"] = to_string(s.c1_sign);
  j["assumed_hypotheses"] = s.assumed_hypotheses;
  if (s.tolerances)
    j["tolerances"] = {{"tol_sym", s.tolerances->tol_sym},
                       {"tol_eig", s.tolerances->tol_eig},
                       {"tol_const", s.tolerances->tol_const}};
  return j;
}

namespace detail {
inline std::vector<Interval> read_box(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array()) throw SpecError(what + " must be an array of [lo, hi] pairs");
  std::vector<Interval> out;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw SpecError(what + " must be an array of [lo, hi] pairs");
    const double lo = e[0].get<double>(), hi = e[1].get<double>();
    if (!(lo < hi)) throw SpecError(what + " has an empty interval");
    out.emplace_back(lo, hi);
  }
  return out;
}

inline std::vector<std::string> read_strings(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array()) throw SpecError(what + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw SpecError(what + " must be an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

inline C1Sign read_c1(const std::string& s) {
  if (s == "negative") return C1Sign::negative;
  if (s == "zero") return C1Sign::zero;
  if (s == "positive") return C1Sign::positive;
  throw SpecError("c1_sign must be one of negative, zero, positive (got '" + s + "')");
}

inline std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t k = 0; k + 1 < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}
}  // namespace detail

inline ManifoldSpec spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SpecError("spec must be a JSON object");
  if (!j.contains("schema_version") || !j["schema_version"].is_number_integer())
    throw SpecError("spec is missing an integer schema_version");
  ManifoldSpec s;
  s.schema_version = j["schema_version"].get<int>();
  if (s.schema_version != kSpecSchemaVersion)
    throw SpecError("unsupported schema_version " + std::to_string(s.schema_version) + " (expected " +
                    std::to_string(kSpecSchemaVersion) + ")");
  try {
    s.label = j.value("label", std::string("unnamed"));
    s.dimension = j.at("dimension").get<int>();
    s.potential = j.at("potential").get<std::string>();
    s.toric = j.value("toric", false);
    const auto& dom = j.at("domain");
    s.domain_box = detail::read_box(dom.at("box"), "domain.box");
    if (dom.contains("constraints")) s.constraints = detail::read_strings(dom["constraints"], "domain.constraints");
    if (j.contains("map")) {
      MapSpec m;
      m.components = detail::read_strings(j["map"].at("components"), "map.components");
      m.involution = j["map"].value("involution", false);
      s.map = m;
    }
    if (j.contains("locus")) {
      LocusSpec l;
      l.components = detail::read_strings(j["locus"].at("components"), "locus.components");
      l.box = detail::read_box(j["locus"].at("box"), "locus.box");
      s.locus = l;
    }
    s.c1_sign = detail::read_c1(j.value("c1_sign", std::string("positive")));
    if (j.contains("assumed_hypotheses"))
      s.assumed_hypotheses = detail::read_strings(j["assumed_hypotheses"], "assumed_hypotheses");
    if (j.contains("tolerances")) {
      Tolerances t;
      const auto& tj = j["tolerances"];
      t.tol_sym = tj.value("tol_sym", t.tol_sym);
      t.tol_eig = tj.value("tol_eig", t.tol_eig);
      t.tol_const = tj.value("tol_const", t.tol_const);
      s.tolerances = t;
    }
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("malformed spec: ") + e.what());
  }
  if (s.dimension < 1 || 2 * s.dimension > kMaxJetVars)
    throw SpecError("dimension must be between 1 and " + std::to_string(kMaxJetVars / 2));
  if (static_cast<int>(s.domain_box.size()) != 2 * s.dimension)
    throw SpecError("domain.box must have 2n = " + std::to_string(2 * s.dimension) + " intervals");
  if (s.map && static_cast<int>(s.map->components.size()) != s.dimension)
    throw SpecError("map must have n components");
  if (s.locus) {
    if (static_cast<int>(s.locus->components.size()) != s.dimension)
      throw SpecError("locus must have n components");
    if (static_cast<int>(s.locus->box.size()) != s.dimension) throw SpecError("locus.box must have n intervals");
  }
  return s;
}

inline ManifoldSpec parse_spec(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = detail::line_column(text, e.byte);
    throw ParseError(std::string("invalid JSON: ") + e.what(), line, col);
  }
  return spec_from_json(j);
}

inline ManifoldSpec read_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open spec file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

// ---------------------------------------------------------------------------
// Compilation

namespace detail {
inline Expression compile_checked(const std::string& src, const std::string& field,
                                  const std::vector<std::string>& allowed) {
  Expression e;
  try {
    e = Expression::parse(src);
  } catch (const ParseError& err) {
    throw ParseError("in " + field + ": " + std::string(err.what()), err.line(), err.column());
  }
  for (const auto& v : e.variables()) {
    bool ok = false;
    for (const auto& a : allowed) ok = ok || a == v;
    if (!ok) throw SpecError("in " + field + ": unknown variable '" + v + "'");
  }
  return e;
}

inline std::vector<std::string> names(const char* prefix, int n) {
  std::vector<std::string> out;
  for (int k = 1; k <= n; ++k) out.push_back(prefix + std::to_string(k));
  return out;
}

inline Expression::Bindings bind(const std::vector<std::string>& names, std::span<const CJet> values) {
  Expression::Bindings b;
  for (std::size_t k = 0; k < names.size(); ++k) b.emplace_back(names[k], values[k]);
  return b;
}

inline VectorField compile_vector(const std::vector<std::string>& comps, const std::string& field,
                                  const std::vector<std::string>& vars) {
  std::vector<Expression> exprs;
  for (std::size_t k = 0; k < comps.size(); ++k)
    exprs.push_back(compile_checked(comps[k], field + "[" + std::to_string(k) + "]", vars));
  return [exprs, vars](std::span<const CJet> z) {
    const auto b = bind(vars, z);
    std::vector<CJet> out;
    out.reserve(exprs.size());
    for (const auto& e : exprs) out.push_back(e.evaluate(b));
    return out;
  };
}
}  // namespace detail

inline ManifoldBundle build_bundle(const ManifoldSpec& s) {
  const int n = s.dimension;
  const auto z = detail::names("z", n);
  std::vector<std::string> potential_vars = z;
  if (s.toric) {
    const auto x = detail::names("x", n);
    potential_vars.insert(potential_vars.end(), x.begin(), x.end());
  }
  const Expression psi_expr = detail::compile_checked(s.potential, "potential", potential_vars);
  ScalarField psi = [psi_expr, z, n, toric = s.toric](std::span<const CJet> zj) {
    auto b = detail::bind(z, zj);
    if (toric)
      for (int k = 0; k < n; ++k) b.emplace_back("x" + std::to_string(k + 1), log(abs2(zj[static_cast<std::size_t>(k)])));
    return psi_expr.evaluate(b);
  };

  std::vector<Expression> constraints;
  for (std::size_t k = 0; k < s.constraints.size(); ++k)
    constraints.push_back(detail::compile_checked(s.constraints[k], "domain.constraints[" + std::to_string(k) + "]", z));
  DomainPredicate domain;
  if (!constraints.empty()) {
    domain = [constraints, z](const ChartPoint& p) {
      const auto zj = coordinate_jets(p, 0);
      const auto b = detail::bind(z, zj);
      for (const auto& c : constraints) {
        const double v = c.evaluate(b).value().real();
        if (!(v > 0.0)) return false;
      }
      return true;
    };
  }

  ManifoldBundle b;
  b.label = s.label;
  b.chart = PotentialChart::analytic(n, psi, domain, s.label);
  if (s.map) b.map = AntiholoMap{n, detail::compile_vector(s.map->components, "map", z), s.map->involution, s.label + ".map"};
  if (s.locus) {
    FixedLocusParam l;
    l.dimension = n;
    l.param = detail::compile_vector(s.locus->components, "locus", detail::names("t", n));
    for (const auto& [lo, hi] : s.locus->box) {
      l.lower.push_back(lo);
      l.upper.push_back(hi);
    }
    l.label = s.label + ".locus";
    b.locus = l;
  }
  b.c1_sign = s.c1_sign;
  b.assumed_hypotheses = s.assumed_hypotheses;
  for (const auto& [lo, hi] : s.domain_box) {
    b.domain_lower.push_back(lo);
    b.domain_upper.push_back(hi);
  }
  b.tolerances = s.tolerances;
  return b;
}

inline ManifoldBundle load_spec(const std::string& path) { return build_bundle(read_spec_file(path)); }

}  // namespace kreal
