#pragma once

/// \file
/// Hermitian metric, Kähler form, Ricci form and curvature of a Kähler
/// potential on a chart.
///
/// Normalizations:
///   g_{j kbar} = d_j d_kbar psi,
///   G(v, w) = 2 Re sum g_{j kbar} v^j conj(w^k)   (real Riemannian metric),
///   omega(v, w) = G(Jv, w),
///   Ric_{j kbar} = -d_j d_kbar log det g,  real Ricci = 2 Re sum Ric_{j kbar} v^j conj(w^k).
/// Real curvature follows riemannian.hpp: Rm(X,Y,Z,W) = G(R(X,Y)Z, W) and
/// Ric(Y,Z) = sum_a Rm(E_a, Y, Z, E_a) over a G-orthonormal frame.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kreal/core/geometry_core.hpp"
#include "kreal/core/jet_matrix.hpp"
#include "kreal/core/riemannian.hpp"

namespace kreal {

class DegenerateMetric : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Smallest/largest eigenvalue ratio below which a metric is rejected.
inline constexpr double kDegenerateRatio = 1e-10;

using DomainPredicate = std::function<bool(const ChartPoint&)>;

/// A Kähler potential on an open chart of C^n.
class PotentialChart {
 public:
  PotentialChart() = default;

  static PotentialChart analytic(int n, ScalarField psi, DomainPredicate domain = {}, std::string label = {}) {
    PotentialChart c;
    c.n_ = n;
    c.psi_ = std::move(psi);
    c.domain_ = std::move(domain);
    c.label_ = std::move(label);
    return c;
  }

  /// A potential known only through point evaluations; derivatives come from
  /// finite differences and are flagged low precision.
  static PotentialChart black_box(int n, BlackBoxField psi, DomainPredicate domain = {}, std::string label = {},
                                  double fd_scale = 1.0) {
    PotentialChart c;
    c.n_ = n;
    c.black_box_ = std::move(psi);
    c.domain_ = std::move(domain);
    c.label_ = std::move(label);
    c.fd_scale_ = fd_scale;
    return c;
  }

  int dimension() const { return n_; }
  const std::string& label() const { return label_; }
  bool low_precision() const { return !psi_ && static_cast<bool>(black_box_); }
  const ScalarField& potential() const { return psi_; }
  const BlackBoxField& black_box_potential() const { return black_box_; }
  const DomainPredicate& domain() const { return domain_; }

  bool contains(const ChartPoint& p) const {
    if (p.dim() != n_) return false;
    for (double x : p.real_view())
      if (!std::isfinite(x)) return false;
    return !domain_ || domain_(p);
  }

  void require(const ChartPoint& p) const {
    if (!contains(p)) throw DomainError("point outside the domain of chart '" + label_ + "'");
  }

  RJet potential_jet(const ChartPoint& p, int order = kMaxJetOrder) const {
    require(p);
    if (psi_) return lift_to_jet(psi_, p, order);
    if (black_box_) return lift_to_jet_fd(black_box_, p, fd_scale_, order);
    throw std::logic_error("chart '" + label_ + "' has no potential");
  }

  double potential_value(const ChartPoint& p) const {
    require(p);
    if (psi_) return lift_to_jet(psi_, p, 0).value();
    return black_box_(p.real_view());
  }

  PotentialChart scaled(double s) const {
    PotentialChart c = *this;
    if (psi_) {
      c.psi_ = [f = psi_, s](std::span<const CJet> z) { return f(z) * cplx{s}; };
    } else {
      c.black_box_ = [f = black_box_, s](std::span<const double> x) { return s * f(x); };
    }
    c.label_ = label_ + "*" + std::to_string(s);
    return c;
  }

 private:
  int n_ = 0;
  ScalarField psi_;
  BlackBoxField black_box_;
  DomainPredicate domain_;
  std::string label_;
  double fd_scale_ = 1.0;
};

struct HermitianMetric {
  Eigen::MatrixXcd g;
  ChartPoint base;
};

struct RealMetricAt {
  Eigen::MatrixXd G;

  double operator()(const RealTangent& v, const RealTangent& w) const { return v.dot(G * w); }
  double norm(const RealTangent& v) const { return std::sqrt(std::max(0.0, (*this)(v, v))); }
};

/// Complex curvature components R_{i jbar k lbar} = Rm(d_i, d_jbar, d_k, d_lbar).
class KahlerCurvature {
 public:
  KahlerCurvature() = default;
  explicit KahlerCurvature(int n) : n_(n), r_(static_cast<std::size_t>(n * n * n * n)) {}

  int dim() const { return n_; }
  cplx& operator()(int i, int j, int k, int l) { return r_[index(i, j, k, l)]; }
  cplx operator()(int i, int j, int k, int l) const { return r_[index(i, j, k, l)]; }

 private:
  std::size_t index(int i, int j, int k, int l) const {
    return static_cast<std::size_t>(((i * n_ + j) * n_ + k) * n_ + l);
  }
  int n_ = 0;
  std::vector<cplx> r_;
};

// ---------------------------------------------------------------------------
// Building blocks from a potential jet

inline Eigen::MatrixXcd hermitian_from_jet(const RJet& psi, int n) {
  Eigen::MatrixXcd g(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) g(j, k) = wirtinger(psi, {j}, {k});
  return g;
}

/// Real 2n x 2n matrix of v, w -> 2 Re sum h_{jk} v^j conj(w^k).
inline Eigen::MatrixXd real_from_hermitian(const Eigen::MatrixXcd& h) {
  const auto n = h.rows();
  Eigen::MatrixXd G(2 * n, 2 * n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k) {
      const double re = 2.0 * h(j, k).real(), im = 2.0 * h(j, k).imag();
      G(2 * j, 2 * k) = re;
      G(2 * j + 1, 2 * k + 1) = re;
      G(2 * j, 2 * k + 1) = im;
      G(2 * j + 1, 2 * k) = -im;
    }
  return G;
}

/// Throws DegenerateMetric unless h is Hermitian positive definite.
inline void check_metric(const Eigen::MatrixXcd& h) {
  const double scale = std::max(1e-300, h.norm());
  if ((h - h.adjoint()).norm() > 1e-10 * scale) throw DegenerateMetric("metric is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  if (!(ev.maxCoeff() > 0.0) || ev.minCoeff() < kDegenerateRatio * ev.maxCoeff())
    throw DegenerateMetric("metric is degenerate or not positive definite (eigenvalue ratio " +
                           std::to_string(ev.minCoeff() / ev.maxCoeff()) + ")");
}

/// g_{j kbar} as complex jets of order (psi order - 2).
inline JetMatrix<cplx> hermitian_metric_jet(const RJet& psi, int n) {
  const CJet c = to_complex(psi);
  std::vector<CJet> dz;
  for (int j = 0; j < n; ++j) dz.push_back(wirtinger_jet(c, j, false));
  JetMatrix<cplx> g(n, n, JetSpace::get(psi.nvars(), psi.order() - 2));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) g(j, k) = wirtinger_jet(dz[static_cast<std::size_t>(j)], k, true);
  return g;
}

/// The real metric G as real jets of order (psi order - 2).
inline JetMatrix<double> real_metric_jet(const RJet& psi, int n) {
  const JetMatrix<cplx> h = hermitian_metric_jet(psi, n);
  JetMatrix<double> G(2 * n, 2 * n, h.space_ptr());
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const RJet re = real_part(h(j, k)) * 2.0, im = imag_part(h(j, k)) * 2.0;
      G(2 * j, 2 * k) = re;
      G(2 * j + 1, 2 * k + 1) = re;
      G(2 * j, 2 * k + 1) = im;
      G(2 * j + 1, 2 * k) = -im;
    }
  return G;
}

inline Eigen::MatrixXcd ricci_from_jet(const RJet& psi, int n) {
  const CJet ld = log_det(hermitian_metric_jet(psi, n));
  Eigen::MatrixXcd ric(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) ric(j, k) = -wirtinger(ld, {j}, {k});
  return ric;
}

/// R_{i jbar k lbar} = -d_i d_jbar g_{k lbar} + sum g^{qbar p} (d_i g_{k qbar}) (d_jbar g_{p lbar}).
inline KahlerCurvature curvature_from_jet(const RJet& psi, int n, const Eigen::MatrixXcd& g) {
  const Eigen::MatrixXcd ginv = g.inverse();  // ginv(q, p) pairs with g(k, q) and g(p, l)
  std::vector<cplx> d1(static_cast<std::size_t>(n * n * n));   // d_i g_{k qbar}
  std::vector<cplx> d1b(static_cast<std::size_t>(n * n * n));  // d_jbar g_{p lbar}
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int q = 0; q < n; ++q) {
        d1[static_cast<std::size_t>((i * n + k) * n + q)] = wirtinger(psi, {i, k}, {q});
        d1b[static_cast<std::size_t>((i * n + k) * n + q)] = wirtinger(psi, {k}, {i, q});
      }
  KahlerCurvature R(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          cplx v = -wirtinger(psi, {i, k}, {j, l});
          for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q)
              v += d1[static_cast<std::size_t>((i * n + k) * n + q)] * ginv(q, p) *
                   d1b[static_cast<std::size_t>((j * n + p) * n + l)];
          R(i, j, k, l) = v;
        }
  return R;
}

/// Rm(X,Y,Z,W) = sum R_{i jbar k lbar} (X^i conj(Y^j) - Y^i conj(X^j)) (Z^k conj(W^l) - W^k conj(Z^l)).
inline double riemann_real(const KahlerCurvature& R, const RealTangent& x, const RealTangent& y,
                           const RealTangent& z, const RealTangent& w) {
  const int n = R.dim();
  const Eigen::VectorXcd X = holomorphic_components(x), Y = holomorphic_components(y);
  const Eigen::VectorXcd Z = holomorphic_components(z), W = holomorphic_components(w);
  cplx s{0.0};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const cplx a = X[i] * std::conj(Y[j]) - Y[i] * std::conj(X[j]);
      if (a == cplx{0.0}) continue;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) s += R(i, j, k, l) * a * (Z[k] * std::conj(W[l]) - W[k] * std::conj(Z[l]));
    }
  return s.real();
}

// ---------------------------------------------------------------------------
// Everything at one point

/// All pointwise metric data of a chart, computed once from the order-4 jet.
struct KahlerGeometry {
  ChartPoint point;
  int n = 0;
  RJet psi;
  Eigen::MatrixXcd g;
  RealMetricAt G;
  Eigen::MatrixXd G_inv;
  KahlerCurvature curvature;
  Eigen::MatrixXcd ricci;

  double inner(const RealTangent& v, const RealTangent& w) const { return G(v, w); }
  double omega(const RealTangent& v, const RealTangent& w) const { return G(apply_J(v), w); }
  double rm(const RealTangent& x, const RealTangent& y, const RealTangent& z, const RealTangent& w) const {
    return riemann_real(curvature, x, y, z, w);
  }
  double ricci_real(const RealTangent& v, const RealTangent& w) const {
    const Eigen::VectorXcd a = holomorphic_components(v), b = holomorphic_components(w);
    cplx s{0.0};
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) s += ricci(j, k) * a[j] * std::conj(b[k]);
    return 2.0 * s.real();
  }
  /// R(x,y)z with the last slot raised by G.
  RealTangent endomorphism(const RealTangent& x, const RealTangent& y, const RealTangent& z) const {
    const int m = 2 * n;
    Eigen::VectorXd b(m);
    for (int q = 0; q < m; ++q) b[q] = rm(x, y, z, Eigen::VectorXd::Unit(m, q));
    return G_inv * b;
  }
};

inline KahlerGeometry geometry_at(const PotentialChart& chart, const ChartPoint& p) {
  KahlerGeometry geo;
  geo.point = p;
  geo.n = chart.dimension();
  geo.psi = chart.potential_jet(p, kMaxJetOrder);
  geo.g = hermitian_from_jet(geo.psi, geo.n);
  check_metric(geo.g);
  geo.G.G = real_from_hermitian(geo.g);
  geo.G_inv = geo.G.G.inverse();
  geo.curvature = curvature_from_jet(geo.psi, geo.n, geo.g);
  geo.ricci = ricci_from_jet(geo.psi, geo.n);
  return geo;
}

// ---------------------------------------------------------------------------
// Pointwise operations

inline HermitianMetric metric_at(const PotentialChart& chart, const ChartPoint& p) {
  const RJet psi = chart.potential_jet(p, 2);
  HermitianMetric m{hermitian_from_jet(psi, chart.dimension()), p};
  check_metric(m.g);
  return m;
}

inline RealMetricAt real_metric_at(const PotentialChart& chart, const ChartPoint& p) {
  return {real_from_hermitian(metric_at(chart, p).g)};
}

/// omega(v, w) = G(Jv, w) as a matrix: omega(v, w) = v^T Omega w.
struct KahlerFormAt {
  Eigen::MatrixXd omega;
  double operator()(const RealTangent& v, const RealTangent& w) const { return v.dot(omega * w); }
};

inline KahlerFormAt kahler_form_at(const PotentialChart& chart, const ChartPoint& p) {
  const RealMetricAt G = real_metric_at(chart, p);
  return {complex_structure(chart.dimension()).transpose() * G.G};
}

inline HermitianMetric ricci_form_at(const PotentialChart& chart, const ChartPoint& p) {
  const RJet psi = chart.potential_jet(p, kMaxJetOrder);
  check_metric(hermitian_from_jet(psi, chart.dimension()));
  return {ricci_from_jet(psi, chart.dimension()), p};
}

inline KahlerCurvature curvature_at(const PotentialChart& chart, const ChartPoint& p) {
  const RJet psi = chart.potential_jet(p, kMaxJetOrder);
  const Eigen::MatrixXcd g = hermitian_from_jet(psi, chart.dimension());
  check_metric(g);
  return curvature_from_jet(psi, chart.dimension(), g);
}

inline double riemann_real(const PotentialChart& chart, const ChartPoint& p, const RealTangent& x,
                           const RealTangent& y, const RealTangent& z, const RealTangent& w) {
  return riemann_real(curvature_at(chart, p), x, y, z, w);
}

inline RealTangent curvature_endomorphism(const PotentialChart& chart, const ChartPoint& p, const RealTangent& x,
                                          const RealTangent& y, const RealTangent& z) {
  return geometry_at(chart, p).endomorphism(x, y, z);
}

/// Levi-Civita symbols of G, layout (k * 2n + i) * 2n + j.
inline std::vector<double> christoffel_real(const PotentialChart& chart, const ChartPoint& p) {
  const RJet psi = chart.potential_jet(p, 3);
  check_metric(hermitian_from_jet(psi, chart.dimension()));
  const auto gamma = christoffel_jets(real_metric_jet(psi, chart.dimension()));
  std::vector<double> r(gamma.size());
  for (std::size_t k = 0; k < gamma.size(); ++k) r[k] = gamma[k].value();
  return r;
}

/// Curvature of G computed directly in real coordinates (Christoffel symbols
/// differentiated as jets), independent of the complex formula.
inline RiemannianCurvature riemann_real_direct(const PotentialChart& chart, const ChartPoint& p) {
  const RJet psi = chart.potential_jet(p, kMaxJetOrder);
  check_metric(hermitian_from_jet(psi, chart.dimension()));
  return riemannian_curvature(real_metric_jet(psi, chart.dimension()));
}

// ---------------------------------------------------------------------------
// Kähler-Einstein residual

struct EinsteinResidual {
  double lambda = 0.0;
  double max_residual = 0.0;
  int used = 0;
  int skipped = 0;
};

/// lambda = median of Ric_{jk}/g_{jk} over well-conditioned entries of all
/// samples; residual = max ||Ric - lambda g||_F / ||g||_F.  Degenerate or
/// out-of-domain samples are skipped and counted.
inline EinsteinResidual einstein_residual(const PotentialChart& chart, std::span<const ChartPoint> samples) {
  if (samples.empty()) throw std::invalid_argument("einstein_residual: empty sample set");
  std::vector<std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd>> data;
  EinsteinResidual out;
  for (const auto& p : samples) {
    try {
      const RJet psi = chart.potential_jet(p, kMaxJetOrder);
      Eigen::MatrixXcd g = hermitian_from_jet(psi, chart.dimension());
      check_metric(g);
      data.emplace_back(std::move(g), ricci_from_jet(psi, chart.dimension()));
    } catch (const DegenerateMetric&) {
      ++out.skipped;
    } catch (const DomainError&) {
      ++out.skipped;
    }
  }
  out.used = static_cast<int>(data.size());
  if (data.empty()) throw DegenerateMetric("einstein_residual: no admissible sample points");
  std::vector<double> ratios;
  for (const auto& [g, ric] : data) {
    const double gn = g.norm();
    for (Eigen::Index j = 0; j < g.rows(); ++j)
      for (Eigen::Index k = 0; k < g.cols(); ++k)
        if (std::abs(g(j, k)) > 1e-6 * gn) ratios.push_back((ric(j, k) / g(j, k)).real());
  }
  std::sort(ratios.begin(), ratios.end());
  const std::size_t m = ratios.size();
  out.lambda = (m % 2 == 1) ? ratios[m / 2] : 0.5 * (ratios[m / 2 - 1] + ratios[m / 2]);
  for (const auto& [g, ric] : data)
    out.max_residual = std::max(out.max_residual, (ric - out.lambda * g).norm() / g.norm());
  return out;
}

}  // namespace kreal
