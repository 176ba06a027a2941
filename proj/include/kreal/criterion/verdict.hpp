#pragma once

/// \file
/// The verification pipeline: hypothesis gates on the ambient chart and the
/// fixed locus, then the trace operator, its spectral test and the
/// restricted-Ricci cross-check.
///
/// Exit codes: 0 einstein, 2 not einstein, 3 hypotheses failed,
/// 4 numerical degeneracy.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "kreal/criterion/einstein_criterion.hpp"
#include "kreal/model/bundle.hpp"
#include "kreal/model/sampling.hpp"

namespace kreal {

inline constexpr int kReportFormatVersion = 1;

enum ExitCode : int {
  kExitEinstein = 0,
  kExitUsage = 1,
  kExitNotEinstein = 2,
  kExitHypothesesFailed = 3,
  kExitDegenerate = 4,
};

/// Thresholds of the individual checks.  Gating checks decide whether the
/// criterion may be evaluated at all; the others are reported only.
struct GateTolerances {
  double antiholomorphy = 1e-10;  // relative to max(1, |Df|)
  double involution = 1e-10;
  double isometry = 1e-8;
  double potential_invariance = 1e-12;
  double ambient_einstein = 1e-6;
  double fixed_locus = 1e-10;
  double rank_ratio = 1e-8;
  double frame_orthonormality = 1e-10;
  double totally_real = 1e-7;
  double second_fundamental_form = 1e-6;

  double anti_isometry = 1e-8;
  double commutation = 1e-9;
  double lagrangian = 1e-7;
  double projection = 1e-12;
  double trace_equivalence = 1e-8;
  double frame_invariance = 1e-9;
};

struct SamplingConfig {
  int ambient_samples = 64;
  int locus_samples = 64;
  std::uint64_t seed = 42;
  double margin = 0.05;
  std::optional<double> tol_sym, tol_eig, tol_const;
  GateTolerances gates;
};

/// Spectral tolerances in effect: command-line overrides, then the bundle's,
/// then the defaults.
inline Tolerances effective_tolerances(const ManifoldBundle& b, const SamplingConfig& c) {
  Tolerances t = b.tolerances.value_or(Tolerances{});
  if (c.tol_sym) t.tol_sym = *c.tol_sym;
  if (c.tol_eig) t.tol_eig = *c.tol_eig;
  if (c.tol_const) t.tol_const = *c.tol_const;
  return t;
}

struct ResidualStats {
  double min = std::numeric_limits<double>::quiet_NaN();
  double median = std::numeric_limits<double>::quiet_NaN();
  double max = std::numeric_limits<double>::quiet_NaN();
  int count = 0;

  static ResidualStats of(std::vector<double> v) {
    ResidualStats s;
    s.count = static_cast<int>(v.size());
    if (v.empty()) return s;
    std::sort(v.begin(), v.end());
    s.min = v.front();
    s.max = v.back();
    const std::size_t m = v.size();
    s.median = (m % 2 == 1) ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
    return s;
  }
};

struct CheckResult {
  std::string name;
  std::string stage;
  bool gating = false;
  std::string gate_group;    // gating checks sharing a group pass if any member passes
  double tolerance = 0.0;
  bool lower_bound = false;  // passes when min >= tolerance rather than max <= tolerance
  ResidualStats stats;
  int failures = 0;
  bool passed = true;
};

struct SampleCounts {
  int requested = 0;
  int used = 0;
  int outside_domain = 0;
  int degenerate = 0;
  int chart_escape = 0;
  int rank_deficient = 0;
};

struct VerificationReport {
  int format_version = kReportFormatVersion;
  std::string manifold;
  int dimension = 0;
  SamplingConfig config;
  Tolerances tolerances;
  std::vector<double> domain_lower, domain_upper;
  std::vector<double> locus_lower, locus_upper;
  bool low_precision = false;
  C1Sign c1_sign = C1Sign::positive;
  std::vector<std::string> assumed_hypotheses;

  SampleCounts ambient, locus;
  std::vector<CheckResult> checks;
  std::vector<std::string> failed_hypotheses;

  std::optional<double> lambda, kappa, C;
  std::optional<double> consistency_residual;  // |lambda - kappa - C| / max(1, |lambda|)
  std::optional<double> C_constancy, kappa_constancy;
  std::vector<double> eigenvalues_first_point;
  std::optional<double> eigenvalue_min, eigenvalue_max;

  std::optional<bool> einstein_by_spectrum, einstein_by_ricci;
  int cross_check_disagreements = 0;

  std::string verdict;
  int exit_code = kExitDegenerate;
  std::vector<std::string> messages;

  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

namespace detail {

inline CheckResult make_check(std::string name, std::string stage, bool gating, double tol,
                              const std::vector<double>& values, bool lower_bound = false,
                              std::string group = {}) {
  CheckResult c;
  c.name = std::move(name);
  c.stage = std::move(stage);
  c.gating = gating;
  c.gate_group = std::move(group);
  c.tolerance = tol;
  c.lower_bound = lower_bound;
  c.stats = ResidualStats::of(values);
  for (double v : values) {
    const bool ok = lower_bound ? v >= tol : v <= tol;
    if (!ok || std::isnan(v)) ++c.failures;
  }
  c.passed = c.failures == 0;
  return c;
}

inline RealTangent random_tangent(std::mt19937_64& rng, int m) {
  RealTangent v(m);
  for (int i = 0; i < m; ++i) v[i] = 2.0 * unit_double(rng) - 1.0;
  return v;
}

inline Eigen::MatrixXd random_orthogonal(std::mt19937_64& rng, int n) {
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = 2.0 * unit_double(rng) - 1.0;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
  return qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
}

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

/// Evaluates all gating checks; returns names of failed gates (groups count once).
inline std::vector<std::string> failed_gates(const std::vector<CheckResult>& checks) {
  std::vector<std::string> failed;
  std::vector<std::string> groups;
  for (const auto& c : checks) {
    if (!c.gating) continue;
    if (c.gate_group.empty()) {
      if (!c.passed) failed.push_back(c.name);
      continue;
    }
    if (std::find(groups.begin(), groups.end(), c.gate_group) != groups.end()) continue;
    groups.push_back(c.gate_group);
    bool any = false;
    for (const auto& d : checks)
      if (d.gating && d.gate_group == c.gate_group && d.passed) any = true;
    if (!any) failed.push_back(c.gate_group);
  }
  return failed;
}

struct LocusSample {
  LocusContext ctx;
  SecondFundamentalForm h;
};

}  // namespace detail

inline VerificationReport verify(const ManifoldBundle& bundle, const SamplingConfig& config = {}) {
  const PotentialChart& chart = bundle.chart;
  const int n = chart.dimension();
  const int m = 2 * n;
  const GateTolerances& gt = config.gates;

  VerificationReport r;
  r.manifold = bundle.label;
  r.dimension = n;
  r.config = config;
  r.tolerances = effective_tolerances(bundle, config);
  r.domain_lower = bundle.domain_lower;
  r.domain_upper = bundle.domain_upper;
  r.low_precision = chart.low_precision();
  r.c1_sign = bundle.c1_sign;
  r.assumed_hypotheses = bundle.assumed_hypotheses;
  if (bundle.c1_sign == C1Sign::zero &&
      std::find(r.assumed_hypotheses.begin(), r.assumed_hypotheses.end(), std::string(kFlatClassHypothesisText)) ==
          r.assumed_hypotheses.end())
    r.assumed_hypotheses.push_back(kFlatClassHypothesisText);
  if (r.low_precision) r.messages.push_back("potential is a black box: derivatives by finite differences (low precision)");

  auto finish = [&r](int code, std::string verdict) {
    r.exit_code = code;
    r.verdict = std::move(verdict);
    return r;
  };

  if (static_cast<int>(bundle.domain_lower.size()) != m || static_cast<int>(bundle.domain_upper.size()) != m) {
    r.messages.push_back("domain box must have 2n intervals");
    return finish(kExitDegenerate, "numerical degeneracy");
  }

  // ---- ambient stage -------------------------------------------------------
  std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  HaltonSampler ambient_sampler(bundle.domain_lower, bundle.domain_upper, config.seed, config.margin);
  std::vector<ChartPoint> points;
  std::vector<KahlerGeometry> geos;
  r.ambient.requested = config.ambient_samples;
  for (int k = 0; k < config.ambient_samples; ++k) {
    const ChartPoint p = ChartPoint::from_real(ambient_sampler.point(static_cast<std::uint64_t>(k)));
    if (!chart.contains(p)) {
      ++r.ambient.outside_domain;
      continue;
    }
    try {
      geos.push_back(geometry_at(chart, p));
      points.push_back(p);
    } catch (const DegenerateMetric&) {
      ++r.ambient.degenerate;
    }
  }
  r.ambient.used = static_cast<int>(points.size());
  const int admitted = r.ambient.used + r.ambient.degenerate;
  if (admitted == 0) {
    r.messages.push_back("no ambient sample lies in the chart domain");
    return finish(kExitDegenerate, "numerical degeneracy");
  }
  if (2 * r.ambient.degenerate > admitted) {
    r.messages.push_back("metric degenerate at " + std::to_string(r.ambient.degenerate) + " of " +
                         std::to_string(admitted) + " ambient samples");
    return finish(kExitDegenerate, "numerical degeneracy");
  }

  // ambient Kahler-Einstein residual
  {
    const EinsteinResidual er = einstein_residual(chart, points);
    r.lambda = er.lambda;
    std::vector<double> res;
    for (const auto& g : geos) res.push_back((g.ricci - er.lambda * g.g).norm() / g.g.norm());
    r.checks.push_back(detail::make_check("ambient_einstein", "ambient", true, gt.ambient_einstein, res));
    const double lam = er.lambda;
    const bool sign_ok = bundle.c1_sign == C1Sign::zero       ? std::abs(lam) <= 1e-8
                         : bundle.c1_sign == C1Sign::positive ? lam > 1e-8
                                                              : lam < -1e-8;
    if (!sign_ok)
      r.messages.push_back(std::string("warning: declared c1 sign '") + to_string(bundle.c1_sign) +
                           "' does not match the measured Einstein constant");
  }

  // curvature commutation with J
  {
    std::vector<double> res;
    for (const auto& g : geos) {
      const RealTangent x = detail::random_tangent(rng, m), y = detail::random_tangent(rng, m),
                        z = detail::random_tangent(rng, m);
      const RealTangent d = g.endomorphism(x, y, apply_J(z)) - apply_J(g.endomorphism(x, y, z));
      const RealTangent ref = g.endomorphism(x, y, z);
      res.push_back(g.G.norm(d) / std::max(1.0, g.G.norm(ref)));
    }
    r.checks.push_back(detail::make_check("curvature_j_commutation", "ambient", false, gt.commutation, res));
  }

  if (!bundle.map) {
    r.failed_hypotheses.push_back("no anti-holomorphic map supplied");
  } else {
    const AntiholoMap& f = *bundle.map;
    std::vector<double> anti, invol, iso, aiso, pot;
    for (const auto& p : points) {
      const Eigen::MatrixXd D = differential(f, p);
      anti.push_back(antiholomorphy_residual(f, p) / std::max(1.0, D.norm()));
      if (f.declared_involution) invol.push_back(involution_residual(f, p));
      try {
        iso.push_back(isometry_residual(f, chart, p));
        aiso.push_back(anti_isometry_residual(f, chart, p));
        pot.push_back(potential_invariance_residual(f, chart, p));
      } catch (const ChartEscape&) {
        ++r.ambient.chart_escape;
      } catch (const DegenerateMetric&) {
        ++r.ambient.chart_escape;
      }
    }
    if (2 * r.ambient.chart_escape > r.ambient.used) {
      r.messages.push_back("map leaves the chart at " + std::to_string(r.ambient.chart_escape) + " of " +
                           std::to_string(r.ambient.used) + " ambient samples");
      return finish(kExitDegenerate, "numerical degeneracy");
    }
    r.checks.push_back(detail::make_check("antiholomorphy", "map", true, gt.antiholomorphy, anti));
    if (f.declared_involution) r.checks.push_back(detail::make_check("involution", "map", true, gt.involution, invol));
    r.checks.push_back(detail::make_check("isometry", "map", true, gt.isometry, iso, false, "isometry"));
    r.checks.push_back(
        detail::make_check("potential_invariance", "map", true, gt.potential_invariance, pot, false, "isometry"));
    r.checks.push_back(detail::make_check("anti_isometry", "map", false, gt.anti_isometry, aiso));
  }

  // ---- locus stage ---------------------------------------------------------
  std::vector<detail::LocusSample> samples;
  if (!bundle.locus) {
    r.failed_hypotheses.push_back("no fixed locus supplied");
  } else if (bundle.map) {
    const FixedLocusParam& locus = *bundle.locus;
    const AntiholoMap& f = *bundle.map;
    r.locus_lower = locus.lower;
    r.locus_upper = locus.upper;
    r.locus.requested = config.locus_samples;
    HaltonSampler locus_sampler(locus.lower, locus.upper, config.seed + 1, config.margin);
    std::vector<double> fixed, rank, ortho, treal, hnorm, hsym, lag;
    for (int k = 0; k < config.locus_samples; ++k) {
      const std::vector<double> t = locus_sampler.point(static_cast<std::uint64_t>(k));
      const ChartPoint p = locus_point(locus, t);
      if (!chart.contains(p)) {
        ++r.locus.outside_domain;
        continue;
      }
      fixed.push_back(fixed_locus_residual(f, locus, t));
      rank.push_back(locus_rank_ratio(locus, t));
      try {
        LocusContext ctx = locus_context(chart, f, locus, t);
        SecondFundamentalForm h = second_fundamental_form(chart, locus, t);
        ortho.push_back(frame_orthonormality_residual(ctx.geo.G, ctx.lp.frame));
        treal.push_back(totally_real_residual(ctx.geo.G, ctx.lp.frame));
        hnorm.push_back(h.norm());
        hsym.push_back(h.symmetry_residual());
        lag.push_back(lagrangian_residual(ctx.geo.G, ctx.lp.frame));
        samples.push_back({std::move(ctx), std::move(h)});
      } catch (const RankDeficiency&) {
        ++r.locus.rank_deficient;
      } catch (const DegenerateMetric&) {
        ++r.locus.degenerate;
      }
    }
    r.locus.used = static_cast<int>(samples.size());
    r.checks.push_back(detail::make_check("fixed_locus", "locus", true, gt.fixed_locus, fixed));
    r.checks.push_back(detail::make_check("locus_rank", "locus", true, gt.rank_ratio, rank, true));
    r.checks.push_back(detail::make_check("frame_orthonormality", "locus", true, gt.frame_orthonormality, ortho));
    r.checks.push_back(detail::make_check("totally_real", "locus", true, gt.totally_real, treal));
    r.checks.push_back(
        detail::make_check("second_fundamental_form", "locus", true, gt.second_fundamental_form, hnorm));
    r.checks.push_back(detail::make_check("h_symmetry", "locus", false, gt.second_fundamental_form, hsym));
    r.checks.push_back(detail::make_check("lagrangian", "locus", false, gt.lagrangian, lag));

    std::vector<double> proj;
    for (const auto& s : samples) {
      double worst = 0.0;
      for (int q = 0; q < 4; ++q) {
        const RealTangent v = detail::random_tangent(rng, m);
        const auto [top, perp] = project_tn(s.ctx.Df, v);
        const auto jv = project_tn(s.ctx.Df, apply_J(v));
        worst = std::max(worst, (top + perp - v).norm() / std::max(1.0, v.norm()));
        worst = std::max(worst, (apply_J(top) - jv.second).norm() / std::max(1.0, v.norm()));
      }
      proj.push_back(worst);
    }
    r.checks.push_back(detail::make_check("projection_identities", "locus", false, gt.projection, proj));

    if (r.locus.rank_deficient > 0)
      r.messages.push_back("locus parametrization rank deficient at " + std::to_string(r.locus.rank_deficient) +
                           " samples");
    if (r.locus.rank_deficient > 0) {
      for (auto& c : r.checks)
        if (c.name == "locus_rank") {
          c.failures += r.locus.rank_deficient;
          c.passed = false;
        }
    }
  }

  r.failed_hypotheses = [&] {
    auto failed = r.failed_hypotheses;
    for (auto& g : detail::failed_gates(r.checks)) failed.push_back(std::move(g));
    return failed;
  }();
  if (!r.failed_hypotheses.empty()) return finish(kExitHypothesesFailed, "hypotheses failed");

  if (samples.empty()) {
    r.messages.push_back("no usable locus samples");
    return finish(kExitDegenerate, "numerical degeneracy");
  }

  // ---- trace operator and cross-check --------------------------------------
  const Tolerances& tol = r.tolerances;
  std::vector<SpectralVerdict> spectral, ricci;
  std::vector<double> equiv, invariance, sym, spread, cs, kappas, emin, emax;
  for (const auto& s : samples) {
    const TraceOperatorAt tr = trace_operator_at(s.ctx);
    const Eigen::MatrixXd M2 = trace_operator_via_mixed_curvature(s.ctx, s.ctx.lp.frame);
    equiv.push_back((tr.M - M2).cwiseAbs().maxCoeff() / std::max(1.0, tr.M.cwiseAbs().maxCoeff()));

    const Eigen::MatrixXd Q = detail::random_orthogonal(rng, n);
    const Eigen::MatrixXd Mq = trace_operator_at(s.ctx, rotate_frame(s.ctx.lp.frame, Q)).M;
    invariance.push_back((Mq - Q.transpose() * tr.M * Q).cwiseAbs().maxCoeff() /
                         std::max(1.0, tr.M.cwiseAbs().maxCoeff()));

    SpectralVerdict v = spectral_test(tr.M, tol);
    sym.push_back(v.symmetric_residual);
    spread.push_back(v.eigenvalue_spread);
    cs.push_back(v.C_est);
    emin.push_back(v.eigenvalues.minCoeff());
    emax.push_back(v.eigenvalues.maxCoeff());
    if (r.eigenvalues_first_point.empty())
      r.eigenvalues_first_point.assign(v.eigenvalues.data(), v.eigenvalues.data() + v.eigenvalues.size());
    spectral.push_back(std::move(v));

    const RestrictedRicci ric = restricted_ricci_matrix(s.ctx.geo, s.ctx.lp.frame);
    SpectralVerdict rv = spectral_test(-ric.matrix, tol);
    kappas.push_back(rv.C_est);
    ricci.push_back(std::move(rv));
  }
  r.checks.push_back(detail::make_check("trace_equivalence", "criterion", false, gt.trace_equivalence, equiv));
  r.checks.push_back(detail::make_check("frame_invariance", "criterion", false, gt.frame_invariance, invariance));
  r.checks.push_back(detail::make_check("trace_symmetry", "criterion", false, tol.tol_sym, sym));
  r.checks.push_back(detail::make_check("eigenvalue_spread", "criterion", false, tol.tol_eig, spread));

  r.C = detail::mean(cs);
  r.kappa = detail::mean(kappas);
  r.C_constancy = constancy_residual(cs);
  r.kappa_constancy = constancy_residual(kappas);
  r.eigenvalue_min = *std::min_element(emin.begin(), emin.end());
  r.eigenvalue_max = *std::max_element(emax.begin(), emax.end());
  r.consistency_residual = std::abs(*r.lambda - *r.kappa - *r.C) / std::max(1.0, std::abs(*r.lambda));
  if (*r.consistency_residual > tol.tol_const)
    r.messages.push_back("lambda = kappa + C fails beyond tol_const");
  if (*r.C_constancy > 0.1 * tol.tol_const && *r.C_constancy <= tol.tol_const)
    r.messages.push_back("C constancy residual within a factor 10 of tol_const");

  r.einstein_by_spectrum = einstein_by_spectrum(spectral, tol);
  r.einstein_by_ricci = einstein_by_spectrum(ricci, tol);
  for (std::size_t k = 0; k < spectral.size(); ++k)
    if (spectral[k].einstein != ricci[k].einstein) ++r.cross_check_disagreements;
  if (r.cross_check_disagreements > 0 || *r.einstein_by_spectrum != *r.einstein_by_ricci) {
    r.messages.push_back("trace operator and restricted Ricci disagree on the Einstein property");
    return finish(kExitDegenerate, "numerical degeneracy");
  }
  if (*r.einstein_by_spectrum) return finish(kExitEinstein, "einstein");
  return finish(kExitNotEinstein, "not einstein");
}

}  // namespace kreal
