#pragma once

/// \file
/// The trace operator tr13 on a fixed locus and its spectral test.
///
/// For a tangent frame (e_a) of the locus,
///   curly_R(zeta, eta, rho) = J [R(J zeta, eta) rho]^perp,
///   tr13(zeta) = sum_a curly_R(e_a, zeta, e_a),
/// and the locus is Einstein iff tr13 = -C Id for a constant C.  The same
/// matrix is also available as -sum_a Rm(Je_a, ., ., Je_a), which gives an
/// independent route used for cross-checking.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "kreal/antiholo/antiholomorphic.hpp"
#include "kreal/kahler/metrics.hpp"
#include "kreal/submanifold/real_submanifold.hpp"

namespace kreal {

/// Relative tolerances of the spectral test.
struct Tolerances {
  double tol_sym = 1e-6;
  double tol_eig = 1e-5;
  double tol_const = 1e-5;
};

/// Ambient geometry, frame and differential of the map at one locus point.
struct LocusContext {
  KahlerGeometry geo;
  LocusPoint lp;
  Eigen::MatrixXd Df;
};

inline LocusContext locus_context(const PotentialChart& chart, const AntiholoMap& f, const FixedLocusParam& locus,
                                  std::span<const double> t) {
  LocusContext ctx;
  ctx.lp = build_frame(chart, locus, t);
  ctx.geo = geometry_at(chart, ctx.lp.p);
  ctx.Df = differential(f, ctx.lp.p);
  return ctx;
}

inline RealTangent curly_R(const LocusContext& ctx, const RealTangent& zeta, const RealTangent& eta,
                           const RealTangent& rho) {
  const RealTangent r = ctx.geo.endomorphism(apply_J(zeta), eta, rho);
  return apply_J(project_tn(ctx.Df, r).second);
}

struct TraceOperatorAt {
  Eigen::MatrixXd M;  // M(b, a) = G(tr13(e_a), e_b)
  FramePair frame;
};

inline TraceOperatorAt trace_operator_at(const LocusContext& ctx, const FramePair& frame) {
  const int n = frame.size();
  TraceOperatorAt out{Eigen::MatrixXd::Zero(n, n), frame};
  for (int a = 0; a < n; ++a) {
    RealTangent tr = RealTangent::Zero(2 * ctx.geo.n);
    for (const auto& e : frame.tangent) tr += curly_R(ctx, e, frame.tangent[static_cast<std::size_t>(a)], e);
    for (int b = 0; b < n; ++b) out.M(b, a) = ctx.geo.inner(tr, frame.tangent[static_cast<std::size_t>(b)]);
  }
  return out;
}

inline TraceOperatorAt trace_operator_at(const LocusContext& ctx) { return trace_operator_at(ctx, ctx.lp.frame); }

/// sum_a Rm(Je_a, zeta, eta, Je_a).
inline double mixed_curvature_trace(const LocusContext& ctx, const FramePair& frame, const RealTangent& zeta,
                                    const RealTangent& eta) {
  double s = 0.0;
  for (const auto& je : frame.normal) s += ctx.geo.rm(je, zeta, eta, je);
  return s;
}

/// The trace operator matrix via M(b, a) = -sum_a Rm(Je_alpha, e_a, e_b, Je_alpha).
inline Eigen::MatrixXd trace_operator_via_mixed_curvature(const LocusContext& ctx, const FramePair& frame) {
  const int n = frame.size();
  Eigen::MatrixXd M(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      M(b, a) = -mixed_curvature_trace(ctx, frame, frame.tangent[static_cast<std::size_t>(a)],
                                       frame.tangent[static_cast<std::size_t>(b)]);
  return M;
}

struct SpectralVerdict {
  Eigen::VectorXd eigenvalues;  // of the symmetric part, ascending
  double symmetric_residual = 0.0;
  double eigenvalue_spread = 0.0;
  double C_est = 0.0;
  bool einstein = false;  // pointwise: symmetric and a single eigenvalue
};

inline SpectralVerdict spectral_test(const Eigen::MatrixXd& M, const Tolerances& tol = {}) {
  SpectralVerdict v;
  const double scale = std::max(1.0, M.norm());
  v.symmetric_residual = (M - M.transpose()).norm() / scale;
  const Eigen::MatrixXd S = 0.5 * (M + M.transpose());
  v.eigenvalues = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(S, Eigen::EigenvaluesOnly).eigenvalues();
  const double mean = v.eigenvalues.mean();
  v.eigenvalue_spread = (v.eigenvalues.maxCoeff() - v.eigenvalues.minCoeff()) / std::max(1.0, std::abs(mean));
  v.C_est = -mean;
  v.einstein = v.symmetric_residual < tol.tol_sym && v.eigenvalue_spread < tol.tol_eig;
  return v;
}

/// Relative spread of a constant sampled at several points.
inline double constancy_residual(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  return (*hi - *lo) / std::max(1.0, std::abs(mean));
}

/// Aggregate over sample points: every point passes and C is constant.
inline bool einstein_by_spectrum(std::span<const SpectralVerdict> points, const Tolerances& tol) {
  if (points.empty()) return false;
  std::vector<double> cs;
  for (const auto& p : points) {
    if (!p.einstein) return false;
    cs.push_back(p.C_est);
  }
  return constancy_residual(cs) < tol.tol_const;
}

}  // namespace kreal
