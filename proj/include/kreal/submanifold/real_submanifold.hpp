#pragma once

/// \file
/// Orthonormal frames along a parametrized fixed locus, tangent/normal
/// projections, and the totally-real, totally-geodesic and Lagrangian checks.
/// The intrinsic connection of the locus is the tangential part of the ambient
/// one (Gauss formula); the second fundamental form is the normal part.

#include <Eigen/Dense>

#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kreal/antiholo/antiholomorphic.hpp"
#include "kreal/kahler/metrics.hpp"

namespace kreal {

/// Frame vectors below this G-norm (relative to the input vector) after
/// projection signal a degenerate parametrization.
inline constexpr double kRankTolerance = 1e-8;

/// Orthonormal (e_1..e_n) tangent to the locus and (Je_1..Je_n).
struct FramePair {
  std::vector<RealTangent> tangent;
  std::vector<RealTangent> normal;
  ChartPoint base;

  int size() const { return static_cast<int>(tangent.size()); }
};

struct LocusPoint {
  std::vector<double> t;
  ChartPoint p;
  FramePair frame;
  Eigen::MatrixXd jacobian;      // dp/dt, 2n x n
  Eigen::MatrixXd coefficients;  // e_a = jacobian * coefficients.col(a)
};

/// The canonical frame field near t0: Gram-Schmidt (in parameter order, with a
/// second orthogonalization pass) of dp/dt_a with respect to G(p(t)), as jets
/// in t of the given order.
struct FrameFieldJets {
  std::vector<std::vector<RJet>> frame;  // frame[a][i], component i of e_a
  std::vector<std::vector<RJet>> basis;  // basis[a][i] = d p_i / d t_a
  JetMatrix<double> metric;              // G(p(t))
};

namespace detail {
inline RJet jet_inner(const JetMatrix<double>& G, const std::vector<RJet>& v, const std::vector<RJet>& w) {
  RJet s(v.front().space_ptr());
  const int m = G.rows();
  for (int i = 0; i < m; ++i) {
    RJet gw(v.front().space_ptr());
    for (int j = 0; j < m; ++j) gw += G(i, j) * w[static_cast<std::size_t>(j)];
    s += v[static_cast<std::size_t>(i)] * gw;
  }
  return s;
}
}  // namespace detail

inline FrameFieldJets frame_field_jets(const PotentialChart& chart, const FixedLocusParam& locus,
                                       std::span<const double> t, int order) {
  const int n = chart.dimension();
  if (locus.dimension != n || static_cast<int>(t.size()) != n)
    throw std::invalid_argument("locus parametrization must have n real parameters");
  const std::vector<CJet> P = locus.param(parameter_jets(t, order + 1));
  if (static_cast<int>(P.size()) != n) throw std::invalid_argument("locus parametrization has wrong component count");
  const ChartPoint p = detail::value_point(P);

  FrameFieldJets out;
  // real coordinate jets x_i(t)
  std::vector<RJet> x;
  for (const auto& pk : P) {
    x.push_back(real_part(pk));
    x.push_back(imag_part(pk));
  }
  for (int a = 0; a < n; ++a) {
    std::vector<RJet> col;
    for (const auto& xi : x) col.push_back(xi.derivative(a));
    out.basis.push_back(std::move(col));
  }
  const JetMatrix<double> Gx = real_metric_jet(chart.potential_jet(p, order + 2), n);
  std::vector<RJet> shifts;
  for (const auto& xi : x) shifts.push_back(xi.truncated(order));
  JetMatrix<double> Gt(2 * n, 2 * n, shifts.front().space_ptr());
  for (int i = 0; i < 2 * n; ++i)
    for (int j = 0; j < 2 * n; ++j) Gt(i, j) = compose(Gx(i, j), std::span<const RJet>(shifts));
  out.metric = Gt;

  for (int a = 0; a < n; ++a) {
    std::vector<RJet> v = out.basis[static_cast<std::size_t>(a)];
    const double input_norm = std::sqrt(std::max(0.0, detail::jet_inner(Gt, v, v).value()));
    for (int pass = 0; pass < 2; ++pass)
      for (int b = 0; b < a; ++b) {
        const auto& e = out.frame[static_cast<std::size_t>(b)];
        const RJet c = detail::jet_inner(Gt, v, e);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * e[i];
      }
    const RJet nrm2 = detail::jet_inner(Gt, v, v);
    if (!(input_norm > 0.0) || !(nrm2.value() > 0.0) || std::sqrt(nrm2.value()) < kRankTolerance * input_norm)
      throw RankDeficiency("locus parametrization is rank deficient at the requested parameter");
    const RJet inv = reciprocal(sqrt(nrm2));
    for (auto& vi : v) vi = vi * inv;
    out.frame.push_back(std::move(v));
  }
  return out;
}

inline LocusPoint build_frame(const PotentialChart& chart, const FixedLocusParam& locus, std::span<const double> t) {
  const FrameFieldJets f = frame_field_jets(chart, locus, t, 0);
  LocusPoint lp;
  lp.t.assign(t.begin(), t.end());
  lp.p = locus_point(locus, t);
  const int n = chart.dimension();
  lp.jacobian.resize(2 * n, n);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < 2 * n; ++i) lp.jacobian(i, a) = f.basis[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)].value();
  for (int a = 0; a < n; ++a) {
    RealTangent e(2 * n);
    for (int i = 0; i < 2 * n; ++i) e[i] = f.frame[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)].value();
    lp.frame.tangent.push_back(e);
    lp.frame.normal.push_back(apply_J(e));
  }
  lp.frame.base = lp.p;
  Eigen::MatrixXd E(2 * n, n);
  for (int a = 0; a < n; ++a) E.col(a) = lp.frame.tangent[static_cast<std::size_t>(a)];
  lp.coefficients = lp.jacobian.colPivHouseholderQr().solve(E);
  return lp;
}

/// Frame e'_a = sum_b e_b Q_ba for an orthogonal Q.
inline FramePair rotate_frame(const FramePair& frame, const Eigen::MatrixXd& Q) {
  FramePair r;
  r.base = frame.base;
  const int n = frame.size();
  for (int a = 0; a < n; ++a) {
    RealTangent e = RealTangent::Zero(frame.tangent.front().size());
    for (int b = 0; b < n; ++b) e += Q(b, a) * frame.tangent[static_cast<std::size_t>(b)];
    r.tangent.push_back(e);
    r.normal.push_back(apply_J(e));
  }
  return r;
}

/// max deviation of the Gram matrix of (e, Je) from the identity.
inline double frame_orthonormality_residual(const RealMetricAt& G, const FramePair& frame) {
  std::vector<RealTangent> all = frame.tangent;
  all.insert(all.end(), frame.normal.begin(), frame.normal.end());
  double r = 0.0;
  for (std::size_t a = 0; a < all.size(); ++a)
    for (std::size_t b = 0; b < all.size(); ++b) r = std::max(r, std::abs(G(all[a], all[b]) - (a == b ? 1.0 : 0.0)));
  return r;
}

/// max |G(e_a, Je_b)|; at least 1 when (e, Je) fails to span the tangent space.
inline double totally_real_residual(const RealMetricAt& G, const FramePair& frame) {
  const int n = frame.size();
  double r = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      r = std::max(r, std::abs(G(frame.tangent[static_cast<std::size_t>(a)], frame.normal[static_cast<std::size_t>(b)])));
  Eigen::MatrixXd E(2 * n, 2 * n);
  for (int a = 0; a < n; ++a) {
    E.col(a) = frame.tangent[static_cast<std::size_t>(a)];
    E.col(n + a) = frame.normal[static_cast<std::size_t>(a)];
  }
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(E).singularValues();
  if (sv(sv.size() - 1) < kRankTolerance * sv(0)) r = std::max(r, 1.0);
  return r;
}

inline double totally_real_residual(const PotentialChart& chart, const LocusPoint& lp) {
  return totally_real_residual(real_metric_at(chart, lp.p), lp.frame);
}

/// max |omega(e_a, e_b)|.
inline double lagrangian_residual(const RealMetricAt& G, const FramePair& frame) {
  double r = 0.0;
  for (const auto& ea : frame.tangent)
    for (const auto& eb : frame.tangent) r = std::max(r, std::abs(G(apply_J(ea), eb)));
  return r;
}

inline double lagrangian_residual(const PotentialChart& chart, const LocusPoint& lp) {
  return lagrangian_residual(real_metric_at(chart, lp.p), lp.frame);
}

/// (v_top, v_perp) = ((Df v + v)/2, (v - Df v)/2) at a fixed point.
inline std::pair<RealTangent, RealTangent> project_tn(const Eigen::MatrixXd& Df, const RealTangent& v) {
  const RealTangent fv = Df * v;
  return {0.5 * (fv + v), 0.5 * (v - fv)};
}

inline std::pair<RealTangent, RealTangent> project_tn(const AntiholoMap& f, const ChartPoint& p, const RealTangent& v) {
  return project_tn(differential(f, p), v);
}

/// h(e_a, e_b) for all a, b at one locus point.
class SecondFundamentalForm {
 public:
  SecondFundamentalForm(int n, std::vector<RealTangent> h, Eigen::MatrixXd G) : n_(n), h_(std::move(h)), G_(std::move(G)) {}

  const RealTangent& operator()(int a, int b) const { return h_[static_cast<std::size_t>(a * n_ + b)]; }

  /// sqrt(sum_ab |h(e_a, e_b)|_G^2)
  double norm() const {
    double s = 0.0;
    for (const auto& v : h_) s += v.dot(G_ * v);
    return std::sqrt(std::max(0.0, s));
  }

  double symmetry_residual() const {
    double r = 0.0;
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b) {
        const RealTangent d = (*this)(a, b) - (*this)(b, a);
        r = std::max(r, std::sqrt(std::max(0.0, d.dot(G_ * d))));
      }
    return r;
  }

 private:
  int n_;
  std::vector<RealTangent> h_;
  Eigen::MatrixXd G_;
};

/// Normal part of nabla_{e_a} e_b along the canonical frame field; the normal
/// space is the G-orthogonal complement of the tangent frame.
inline SecondFundamentalForm second_fundamental_form(const PotentialChart& chart, const FixedLocusParam& locus,
                                                     std::span<const double> t) {
  const int n = chart.dimension();
  const int m = 2 * n;
  const FrameFieldJets f = frame_field_jets(chart, locus, t, 1);
  const ChartPoint p = locus_point(locus, t);
  const auto gamma = christoffel_real(chart, p);
  const Eigen::MatrixXd G = f.metric.value();

  Eigen::MatrixXd dP(m, n), E(m, n);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < m; ++i) {
      dP(i, a) = f.basis[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)].value();
      E(i, a) = f.frame[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)].value();
    }
  const Eigen::MatrixXd A = dP.colPivHouseholderQr().solve(E);

  std::vector<RealTangent> h;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      RealTangent v = RealTangent::Zero(m);
      const auto& eb = f.frame[static_cast<std::size_t>(b)];
      for (int i = 0; i < m; ++i) {
        double d = 0.0;
        for (int c = 0; c < n; ++c) d += A(c, a) * eb[static_cast<std::size_t>(i)].coeff(unit_index(c));
        v[i] = d;
      }
      for (int k = 0; k < m; ++k)
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j) v[k] += gamma[static_cast<std::size_t>((k * m + i) * m + j)] * E(i, a) * E(j, b);
      RealTangent normal = v;
      for (int c = 0; c < n; ++c) normal -= E.col(c).dot(G * v) * E.col(c);
      h.push_back(normal);
    }
  return SecondFundamentalForm(n, std::move(h), G);
}

/// Ambient Ricci minus the mixed curvature sum, valid on totally real,
/// totally geodesic loci.
struct RestrictedRicci {
  Eigen::MatrixXd matrix;  // entries (a, b) = Ric_Y(e_a, e_b)
  bool hypotheses_verified = true;
};

inline double restricted_ricci(const KahlerGeometry& geo, const FramePair& frame, const RealTangent& zeta,
                               const RealTangent& eta) {
  double s = geo.ricci_real(zeta, eta);
  for (const auto& je : frame.normal) s -= geo.rm(je, zeta, eta, je);
  return s;
}

inline RestrictedRicci restricted_ricci_matrix(const KahlerGeometry& geo, const FramePair& frame,
                                               bool hypotheses_verified = true) {
  const int n = frame.size();
  RestrictedRicci r;
  r.matrix.resize(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      r.matrix(a, b) = restricted_ricci(geo, frame, frame.tangent[static_cast<std::size_t>(a)],
                                        frame.tangent[static_cast<std::size_t>(b)]);
  r.hypotheses_verified = hypotheses_verified;
  return r;
}

/// Chart-level form: checks the totally-geodesic hypothesis (||h|| <= h_tol)
/// and reports it alongside the value.
struct RestrictedRicciValue {
  double value = 0.0;
  bool hypotheses_verified = true;
};

inline RestrictedRicciValue restricted_ricci(const PotentialChart& chart, const FixedLocusParam& locus,
                                             const LocusPoint& lp, const RealTangent& zeta, const RealTangent& eta,
                                             double h_tol = 1e-6) {
  const KahlerGeometry geo = geometry_at(chart, lp.p);
  const bool ok = second_fundamental_form(chart, locus, lp.t).norm() <= h_tol &&
                  totally_real_residual(geo.G, lp.frame) <= 1e-7;
  return {restricted_ricci(geo, lp.frame, zeta, eta), ok};
}

}  // namespace kreal
