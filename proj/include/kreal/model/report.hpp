#pragma once

/// \file
/// Report serialization (JSON and text) and the run_verify driver.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "kreal/criterion/verdict.hpp"
#include "kreal/model/spec.hpp"

namespace kreal {

namespace detail {
inline nlohmann::ordered_json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

inline nlohmann::ordered_json optional_number(const std::optional<double>& v) {
  return v ? number_or_null(*v) : nlohmann::ordered_json(nullptr);
}

inline nlohmann::ordered_json counts_json(const SampleCounts& c) {
  return {{"requested", c.requested},       {"used", c.used},
          {"outside_domain", c.outside_domain}, {"degenerate", c.degenerate},
          {"chart_escape", c.chart_escape}, {"rank_deficient", c.rank_deficient}};
}

inline nlohmann::ordered_json box_json(const std::vector<double>& lo, const std::vector<double>& hi) {
  nlohmann::ordered_json a = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < lo.size() && k < hi.size(); ++k) a.push_back({lo[k], hi[k]});
  return a;
}
}  // namespace detail

inline nlohmann::ordered_json to_json(const VerificationReport& r) {
  using nlohmann::ordered_json;
  using detail::number_or_null;
  using detail::optional_number;
  ordered_json j;
  j["format_version"] = r.format_version;
  j["manifold"] = r.manifold;
  j["dimension"] = r.dimension;
  const auto& c = r.config;
  j["config"] = {{"ambient_samples", c.ambient_samples},
                 {"locus_samples", c.locus_samples},
                 {"seed", c.seed},
                 {"margin", c.margin},
                 {"tolerances",
                  {{"tol_sym", r.tolerances.tol_sym},
                   {"tol_eig", r.tolerances.tol_eig},
                   {"tol_const", r.tolerances.tol_const}}}};
  j["verified_domain"] = {{"ambient_box", detail::box_json(r.domain_lower, r.domain_upper)},
                          {"locus_box", detail::box_json(r.locus_lower, r.locus_upper)},
                          {"scope", "chart-local, at sampled points"}};
  j["precision"] = r.low_precision ? "finite-difference (low precision)" : "jet (exact derivatives)";
  j["c1_sign"] = to_string(r.c1_sign);
  j["assumed_hypotheses"] = r.assumed_hypotheses;
  j["samples"] = {{"ambient", detail::counts_json(r.ambient)}, {"locus", detail::counts_json(r.locus)}};
  ordered_json checks = ordered_json::array();
  for (const auto& ch : r.checks) {
    checks.push_back({{"name", ch.name},
                      {"stage", ch.stage},
                      {"gating", ch.gating},
                      {"tolerance", ch.tolerance},
                      {"bound", ch.lower_bound ? "min" : "max"},
                      {"residual",
                       {{"min", number_or_null(ch.stats.min)},
                        {"median", number_or_null(ch.stats.median)},
                        {"max", number_or_null(ch.stats.max)},
                        {"count", ch.stats.count}}},
                      {"failures", ch.failures},
                      {"passed", ch.passed}});
  }
  j["checks"] = checks;
  j["failed_hypotheses"] = r.failed_hypotheses;
  j["constants"] = {{"lambda", optional_number(r.lambda)},
                    {"kappa", optional_number(r.kappa)},
                    {"C", optional_number(r.C)},
                    {"lambda_minus_kappa_minus_C", optional_number(r.consistency_residual)},
                    {"C_constancy", optional_number(r.C_constancy)},
                    {"kappa_constancy", optional_number(r.kappa_constancy)}};
  ordered_json first = ordered_json::array();
  for (double v : r.eigenvalues_first_point) first.push_back(number_or_null(v));
  j["trace_operator"] = {{"eigenvalues_first_point", first},
                         {"eigenvalue_min", optional_number(r.eigenvalue_min)},
                         {"eigenvalue_max", optional_number(r.eigenvalue_max)}};
  auto opt_bool = [](const std::optional<bool>& b) { return b ? ordered_json(*b) : ordered_json(nullptr); };
  j["einstein"] = {{"by_spectrum", opt_bool(r.einstein_by_spectrum)},
                   {"by_restricted_ricci", opt_bool(r.einstein_by_ricci)},
                   {"pointwise_disagreements", r.cross_check_disagreements}};
  j["verdict"] = r.verdict;
  j["exit_code"] = r.exit_code;
  j["messages"] = r.messages;
  return j;
}

inline std::string report_json(const VerificationReport& r) { return to_json(r).dump(2) + "\n"; }

namespace detail {
inline std::string fmt(const char* f, double v) {
  if (!std::isfinite(v)) return "-";
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v + 0.0);
  return buf;
}
inline std::string fmt_opt(const std::optional<double>& v) { return v ? fmt("%.10g", *v) : "-"; }
}  // namespace detail

inline std::string report_text(const VerificationReport& r) {
  std::ostringstream os;
  os << "manifold   " << r.manifold << " (n = " << r.dimension << ")\n";
  os << "precision  " << (r.low_precision ? "finite differences (low precision)" : "jets (exact derivatives)") << "\n";
  os << "seed       " << r.config.seed << ", ambient samples " << r.ambient.used << "/" << r.ambient.requested
     << ", locus samples " << r.locus.used << "/" << r.locus.requested << "\n";
  os << "tolerance  sym " << r.tolerances.tol_sym << ", eig " << r.tolerances.tol_eig << ", const "
     << r.tolerances.tol_const << "\n";
  os << "c1 sign    " << to_string(r.c1_sign) << "\n";
  for (const auto& h : r.assumed_hypotheses) os << "assumed    " << h << "\n";
  const int skipped_a = r.ambient.outside_domain + r.ambient.degenerate + r.ambient.chart_escape;
  const int skipped_l = r.locus.outside_domain + r.locus.degenerate + r.locus.rank_deficient;
  if (skipped_a + skipped_l > 0)
    os << "skipped    ambient: " << r.ambient.outside_domain << " outside, " << r.ambient.degenerate << " degenerate, "
       << r.ambient.chart_escape << " escaped; locus: " << r.locus.outside_domain << " outside, "
       << r.locus.degenerate << " degenerate, " << r.locus.rank_deficient << " rank deficient\n";
  os << "\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-26s %-9s %-4s %-10s %-11s %-11s %-11s %s\n", "check", "stage", "gate", "tol", "min",
                "median", "max", "result");
  os << line;
  for (const auto& c : r.checks) {
    std::snprintf(line, sizeof line, "%-26s %-9s %-4s %-10s %-11s %-11s %-11s %s\n", c.name.c_str(), c.stage.c_str(),
                  c.gating ? "yes" : "no", (std::string(c.lower_bound ? ">=" : "<=") + detail::fmt("%.0e", c.tolerance)).c_str(),
                  detail::fmt("%.3e", c.stats.min).c_str(), detail::fmt("%.3e", c.stats.median).c_str(),
                  detail::fmt("%.3e", c.stats.max).c_str(), c.passed ? "pass" : "FAIL");
    os << line;
  }
  os << "\n";
  os << "lambda = " << detail::fmt_opt(r.lambda) << "   kappa = " << detail::fmt_opt(r.kappa)
     << "   C = " << detail::fmt_opt(r.C) << "\n";
  if (r.consistency_residual) os << "|lambda - kappa - C| / max(1, |lambda|) = " << detail::fmt("%.3e", *r.consistency_residual) << "\n";
  if (!r.eigenvalues_first_point.empty()) {
    os << "trace operator eigenvalues (first point):";
    for (double v : r.eigenvalues_first_point) os << " " << detail::fmt("%.10g", v);
    os << "\n";
  }
  if (r.einstein_by_spectrum)
    os << "einstein by spectrum: " << (*r.einstein_by_spectrum ? "yes" : "no")
       << ", by restricted Ricci: " << (r.einstein_by_ricci && *r.einstein_by_ricci ? "yes" : "no") << "\n";
  for (const auto& h : r.failed_hypotheses) os << "failed     " << h << "\n";
  for (const auto& m : r.messages) os << "note       " << m << "\n";
  os << "verdict    " << r.verdict << (r.exit_code <= kExitNotEinstein ? " (at sampled points)" : "") << ", exit "
     << r.exit_code << "\n";
  return os.str();
}

enum class ReportFormat { text, json };

/// Runs the pipeline and writes the report to `out`; returns the exit code.
inline int run_verify(const ManifoldBundle& bundle, const SamplingConfig& config, ReportFormat format,
                      std::ostream& out) {
  const VerificationReport r = verify(bundle, config);
  out << (format == ReportFormat::json ? report_json(r) : report_text(r));
  return r.exit_code;
}

/// One line per check name: what it measures and its threshold.
struct CheckExplanation {
  const char* name;
  const char* formula;
  const char* threshold;
};

inline const std::vector<CheckExplanation>& check_explanations() {
  static const std::vector<CheckExplanation> table = {
      {"ambient_einstein", "|Ric - lambda g|_F / |g|_F, lambda = median of Ric_jk / g_jk, Ric = -dd' log det g",
       "<= 1e-6 (gate)"},
      {"curvature_j_commutation", "|R(x,y)Jz - J R(x,y)z|_G / max(1, |R(x,y)z|_G), random x, y, z", "<= 1e-9"},
      {"antiholomorphy", "|Df J + J Df|_2 / max(1, |Df|_F)", "<= 1e-10 (gate)"},
      {"involution", "|f(f(p)) - p|", "<= 1e-10 (gate, declared involutions only)"},
      {"isometry", "|Df^T G(f(p)) Df - G(p)|_F / |G(p)|_F", "<= 1e-8 (gate, or potential_invariance)"},
      {"potential_invariance", "|psi(f(p)) - psi(p)|", "<= 1e-12 (gate, or isometry)"},
      {"anti_isometry", "|Df^T omega(f(p)) Df + omega(p)|_F / |omega(p)|_F", "<= 1e-8"},
      {"fixed_locus", "|f(p(t)) - p(t)|", "<= 1e-10 (gate)"},
      {"locus_rank", "smallest / largest singular value of dp/dt", ">= 1e-8 (gate)"},
      {"frame_orthonormality", "max |Gram(e, Je) - I|", "<= 1e-10 (gate)"},
      {"totally_real", "max |G(e_a, Je_b)|, at least 1 if (e, Je) is not a basis", "<= 1e-7 (gate)"},
      {"second_fundamental_form", "sqrt(sum |h(e_a, e_b)|_G^2), h = normal part of nabla_{e_a} e_b", "<= 1e-6 (gate)"},
      {"h_symmetry", "max |h(e_a, e_b) - h(e_b, e_a)|_G", "<= 1e-6"},
      {"lagrangian", "max |omega(e_a, e_b)|", "<= 1e-7"},
      {"projection_identities", "v_top + v_perp - v and J v_top - (Jv)_perp, v_top = (Df v + v)/2", "<= 1e-12"},
      {"trace_equivalence", "max |M - M'|, M_ba = G(sum_a J[R(Je_a, e_a) e_a]^perp, e_b), M'_ba = -sum Rm(Je, e_a, e_b, Je)",
       "<= 1e-8"},
      {"frame_invariance", "max |M(eQ) - Q^T M(e) Q| for a random orthogonal Q", "<= 1e-9"},
      {"trace_symmetry", "|M - M^T|_F / max(1, |M|_F)", "<= tol_sym"},
      {"eigenvalue_spread", "(max - min eigenvalue of sym M) / max(1, |mean|); C = -mean", "<= tol_eig"},
  };
  return table;
}

inline const CheckExplanation* find_explanation(const std::string& name) {
  for (const auto& e : check_explanations())
    if (name == e.name) return &e;
  return nullptr;
}

}  // namespace kreal
