#pragma once

/// \file
/// Built-in manifolds, all expressed as specs so they can be exported and
/// reloaded through the same path as user files.

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "kreal/model/spec.hpp"

namespace kreal {

namespace detail {
inline std::string join_terms(int n, const std::function<std::string(int)>& term, const char* sep = " + ") {
  std::string s;
  for (int k = 1; k <= n; ++k) {
    if (k > 1) s += sep;
    s += term(k);
  }
  return s;
}

inline std::string idx(const char* v, int k) { return v + std::to_string(k); }

inline std::vector<Interval> cube(int dims, double lo, double hi) { return std::vector<Interval>(static_cast<std::size_t>(dims), {lo, hi}); }

inline std::vector<std::string> conj_map(int n, double scale = 1.0) {
  std::vector<std::string> c;
  for (int k = 1; k <= n; ++k) {
    std::string s = "conj(" + idx("z", k) + ")";
    if (scale != 1.0) {
      std::ostringstream os;
      os << scale << "*" << s;
      s = os.str();
    }
    c.push_back(s);
  }
  return c;
}

inline std::vector<std::string> identity_locus(int n) {
  std::vector<std::string> c;
  for (int k = 1; k <= n; ++k) c.push_back(idx("t", k));
  return c;
}

inline void require_n(int n, int lo, int hi, const char* what) {
  if (n < lo || n > hi)
    throw std::invalid_argument(std::string(what) + ": n must be between " + std::to_string(lo) + " and " +
                                std::to_string(hi));
}
}  // namespace detail

/// Fubini-Study on the affine chart w_0 = 1 of CP^n, conjugation, RP^n slice.
inline ManifoldSpec builtin_cpn(int n) {
  detail::require_n(n, 1, 4, "cpn");
  ManifoldSpec s;
  s.label = "cp" + std::to_string(n);
  s.dimension = n;
  s.potential = "log(1 + " + detail::join_terms(n, [](int k) { return "abs2(" + detail::idx("z", k) + ")"; }) + ")";
  s.domain_box = detail::cube(2 * n, -1.5, 1.5);
  s.map = MapSpec{detail::conj_map(n), true};
  s.locus = LocusSpec{detail::identity_locus(n), detail::cube(n, -2.0, 2.0)};
  s.c1_sign = C1Sign::positive;
  return s;
}

/// The quadric sum_{j<=n+1} w_j^2 = 1 in the affine chart of CP^{n+1}, as the
/// graph w_{n+1} = sqrt(1 - sum w_j^2) over the branch with positive real part.
/// Its real points form a patch of the round sphere.
inline ManifoldSpec builtin_quadric(int n) {
  detail::require_n(n, 1, 3, "quadric");
  ManifoldSpec s;
  s.label = "quadric" + std::to_string(n);
  s.dimension = n;
  const std::string sq = detail::join_terms(n, [](int k) { return detail::idx("z", k) + "^2"; });
  const std::string ab = detail::join_terms(n, [](int k) { return "abs2(" + detail::idx("z", k) + ")"; });
  s.potential = "log(1 + " + ab + " + abs2(sqrt(1 - (" + sq + "))))";
  s.domain_box = detail::cube(2 * n, -0.4, 0.4);
  s.constraints = {"re(1 - (" + sq + ")) - 0.05"};
  s.map = MapSpec{detail::conj_map(n), true};
  s.locus = LocusSpec{detail::identity_locus(n), detail::cube(n, -0.55, 0.55)};
  s.c1_sign = C1Sign::positive;
  return s;
}

/// psi = |w|^2 on a fundamental domain of a flat torus.
inline ManifoldSpec builtin_flat_torus(int n) {
  detail::require_n(n, 1, 4, "flat-torus");
  ManifoldSpec s;
  s.label = "flat-torus" + std::to_string(n);
  s.dimension = n;
  s.potential = detail::join_terms(n, [](int k) { return "abs2(" + detail::idx("z", k) + ")"; });
  s.domain_box = detail::cube(2 * n, -0.5, 0.5);
  s.map = MapSpec{detail::conj_map(n), true};
  s.locus = LocusSpec{detail::identity_locus(n), detail::cube(n, -0.5, 0.5)};
  s.c1_sign = C1Sign::zero;
  s.assumed_hypotheses = {kFlatClassHypothesisText};
  return s;
}

/// A torus-invariant potential f(x_1..x_n), x_i = log|z_i|^2, on (C*)^n.
/// `orthant` picks the sign of each real coordinate on the locus (+1 or -1).
inline ManifoldSpec builtin_toric(int n, const std::string& potential, const std::string& label, C1Sign c1,
                                  std::vector<int> orthant = {}) {
  detail::require_n(n, 1, 4, "toric");
  if (orthant.empty()) orthant.assign(static_cast<std::size_t>(n), 1);
  if (static_cast<int>(orthant.size()) != n) throw std::invalid_argument("toric: orthant needs n signs");
  ManifoldSpec s;
  s.label = label;
  s.dimension = n;
  s.potential = potential;
  s.toric = true;
  for (int k = 0; k < n; ++k) {
    const int sign = orthant[static_cast<std::size_t>(k)];
    if (sign != 1 && sign != -1) throw std::invalid_argument("toric: orthant signs must be +1 or -1");
    s.domain_box.push_back(sign > 0 ? Interval{0.3, 1.5} : Interval{-1.5, -0.3});
    s.domain_box.push_back({-0.6, 0.6});
  }
  for (int k = 1; k <= n; ++k) s.constraints.push_back("abs2(" + detail::idx("z", k) + ") - 0.01");
  s.map = MapSpec{detail::conj_map(n), true};
  LocusSpec l;
  for (int k = 1; k <= n; ++k) {
    const int sign = orthant[static_cast<std::size_t>(k - 1)];
    l.components.push_back(sign > 0 ? detail::idx("t", k) : "-" + detail::idx("t", k));
    l.box.push_back({0.3, 1.5});
  }
  s.locus = l;
  s.c1_sign = c1;
  if (c1 == C1Sign::zero) s.assumed_hypotheses = {kFlatClassHypothesisText};
  return s;
}

/// f = log(1 + sum e^{x_i}): Fubini-Study on the torus chart.
inline ManifoldSpec builtin_toric_fs(int n, std::vector<int> orthant = {}) {
  return builtin_toric(n, "log(1 + " + detail::join_terms(n, [](int k) { return "exp(" + detail::idx("x", k) + ")"; }) + ")",
                       "toric-fs" + std::to_string(n), C1Sign::positive, std::move(orthant));
}

/// f = sum x_i^2 / 2: a flat cylinder metric.
inline ManifoldSpec builtin_toric_quadratic(int n) {
  return builtin_toric(n, detail::join_terms(n, [](int k) { return detail::idx("x", k) + "^2/2"; }),
                       "toric-quadratic" + std::to_string(n), C1Sign::zero);
}

/// CP^1 x CP^2 with the second factor scaled by 3/2: Kahler-Einstein, but the
/// real slice RP^1 x RP^2 is not Einstein.
inline ManifoldSpec builtin_product_cp1_cp2() {
  ManifoldSpec s;
  s.label = "cp1xcp2";
  s.dimension = 3;
  s.potential = "log(1 + abs2(z1)) + 1.5*log(1 + abs2(z2) + abs2(z3))";
  s.domain_box = detail::cube(6, -1.5, 1.5);
  s.map = MapSpec{detail::conj_map(3), true};
  s.locus = LocusSpec{detail::identity_locus(3), detail::cube(3, -2.0, 2.0)};
  s.c1_sign = C1Sign::positive;
  return s;
}

/// Flat potential plus a quartic bump: Kahler but not Einstein.
inline ManifoldSpec builtin_flat_perturbed(int n) {
  ManifoldSpec s = builtin_flat_torus(n);
  s.label = "flat-perturbed" + std::to_string(n);
  s.potential += " + 0.1*abs2(z1)^2";
  return s;
}

/// Fubini-Study with the non-isometric map w -> 2 conj(w).
inline ManifoldSpec builtin_cpn_nonisometric(int n) {
  ManifoldSpec s = builtin_cpn(n);
  s.label = "cp" + std::to_string(n) + "-nonisometric";
  s.domain_box = detail::cube(2 * n, -0.5, 0.5);
  s.map = MapSpec{detail::conj_map(n, 2.0), false};
  return s;
}

/// psi = |z1|^2 on C^2: the metric is degenerate everywhere.
inline ManifoldSpec builtin_degenerate_chart() {
  ManifoldSpec s = builtin_flat_torus(2);
  s.label = "degenerate-chart";
  s.potential = "abs2(z1)";
  s.assumed_hypotheses.clear();
  s.c1_sign = C1Sign::zero;
  return s;
}

struct BuiltinInfo {
  std::string name;
  std::string description;
  bool takes_n;
  int default_n;
  std::function<ManifoldSpec(int)> make;
};

inline const std::vector<BuiltinInfo>& builtin_catalog() {
  static const std::vector<BuiltinInfo> catalog = {
      {"cpn", "Fubini-Study CP^n, conjugation, RP^n (n = 1..4)", true, 2, builtin_cpn},
      {"quadric", "quadric in CP^{n+1}, conjugation, sphere patch (n = 1..3)", true, 2, builtin_quadric},
      {"flat-torus", "flat torus, conjugation, real slice (n = 1..4)", true, 2, builtin_flat_torus},
      {"toric-fs", "Fubini-Study via log(1 + sum e^x_i) on (C*)^n", true, 2, [](int n) { return builtin_toric_fs(n); }},
      {"toric-quadratic", "flat toric potential sum x_i^2/2 on (C*)^n", true, 2, builtin_toric_quadratic},
      {"cp1xcp2", "CP^1 x CP^2 (second factor scaled 3/2); locus not Einstein", false, 3,
       [](int) { return builtin_product_cp1_cp2(); }},
      {"flat-perturbed", "|w|^2 + 0.1|w_1|^4; ambient metric not Einstein", true, 2, builtin_flat_perturbed},
      {"cpn-nonisometric", "Fubini-Study with w -> 2 conj(w); not an isometry", true, 1, builtin_cpn_nonisometric},
      {"degenerate-chart", "psi = |z1|^2 on C^2; degenerate metric", false, 2,
       [](int) { return builtin_degenerate_chart(); }},
  };
  return catalog;
}

inline const BuiltinInfo* find_builtin(const std::string& name) {
  for (const auto& b : builtin_catalog())
    if (b.name == name) return &b;
  return nullptr;
}

/// Spec of a built-in; n <= 0 selects its default dimension.
inline ManifoldSpec builtin_spec(const std::string& name, int n = 0) {
  const BuiltinInfo* b = find_builtin(name);
  if (!b) throw std::invalid_argument("unknown built-in manifold '" + name + "'");
  return b->make(n > 0 ? n : b->default_n);
}

inline ManifoldBundle builtin_bundle(const std::string& name, int n = 0) { return build_bundle(builtin_spec(name, n)); }

}  // namespace kreal
