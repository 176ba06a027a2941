#pragma once

/// \file
/// Anti-holomorphic self-maps of a chart, their fixed-locus parametrizations,
/// and the residuals that certify anti-holomorphy, (anti-)isometry and
/// potential invariance.

#include <Eigen/Dense>

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kreal/core/geometry_core.hpp"
#include "kreal/kahler/metrics.hpp"

namespace kreal {

class ChartEscape : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RankDeficiency : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A self-map of a chart, given in chart coordinates.
struct AntiholoMap {
  int dimension = 0;
  VectorField forward;
  bool declared_involution = false;
  std::string label;
};

/// A parametrization t -> p(t) of the fixed locus over a box of R^n.
struct FixedLocusParam {
  int dimension = 0;
  VectorField param;  // takes real parameter jets t_1..t_n
  std::vector<double> lower, upper;
  std::string label;
};

namespace detail {
inline ChartPoint value_point(const std::vector<CJet>& jets) {
  std::vector<cplx> z;
  z.reserve(jets.size());
  for (const auto& j : jets) z.push_back(j.value());
  return ChartPoint(std::move(z));
}

/// Real Jacobian of complex-valued jets (order >= 1) w.r.t. their variables.
inline Eigen::MatrixXd real_jacobian(const std::vector<CJet>& jets) {
  const int rows = 2 * static_cast<int>(jets.size());
  const int cols = jets.front().nvars();
  Eigen::MatrixXd D(rows, cols);
  for (std::size_t k = 0; k < jets.size(); ++k)
    for (int v = 0; v < cols; ++v) {
      const cplx d = jets[k].coeff(unit_index(v));
      D(static_cast<Eigen::Index>(2 * k), v) = d.real();
      D(static_cast<Eigen::Index>(2 * k + 1), v) = d.imag();
    }
  return D;
}
}  // namespace detail

inline ChartPoint apply_map(const AntiholoMap& f, const ChartPoint& p) {
  const auto z = coordinate_jets(p, 0);
  return detail::value_point(f.forward(z));
}

/// Image of p, required to lie in the chart.
inline ChartPoint apply_map(const AntiholoMap& f, const PotentialChart& chart, const ChartPoint& p) {
  ChartPoint q = apply_map(f, p);
  if (!chart.contains(q)) throw ChartEscape("map '" + f.label + "' sends a point outside chart '" + chart.label() + "'");
  return q;
}

/// Df(p) as a real 2n x 2n matrix in the (x1, y1, ...) basis.
inline Eigen::MatrixXd differential(const AntiholoMap& f, const ChartPoint& p) {
  return detail::real_jacobian(f.forward(coordinate_jets(p, 1)));
}

inline RealTangent pushforward(const AntiholoMap& f, const PotentialChart& chart, const ChartPoint& p,
                               const RealTangent& v) {
  chart.require(p);
  apply_map(f, chart, p);
  return differential(f, p) * v;
}

/// Operator norm of Df J + J Df (zero exactly for anti-holomorphic maps).
inline double antiholomorphy_residual(const AntiholoMap& f, const ChartPoint& p) {
  const Eigen::MatrixXd D = differential(f, p);
  const Eigen::MatrixXd J = complex_structure(p.dim());
  const Eigen::MatrixXd A = D * J + J * D;
  return Eigen::JacobiSVD<Eigen::MatrixXd>(A).singularValues()(0);
}

/// ||f(f(p)) - p||, for maps declared to be involutions.
inline double involution_residual(const AntiholoMap& f, const ChartPoint& p) {
  const ChartPoint q = apply_map(f, apply_map(f, p));
  double s = 0.0;
  for (int j = 0; j < p.dim(); ++j) s += std::norm(q.holo()[j] - p.holo()[j]);
  return std::sqrt(s);
}

/// Pulled-back real metric (f*G)_p = Df^T G_{f(p)} Df.
inline Eigen::MatrixXd pullback_metric(const AntiholoMap& f, const PotentialChart& chart, const ChartPoint& p) {
  const ChartPoint q = apply_map(f, chart, p);
  const Eigen::MatrixXd D = differential(f, p);
  return D.transpose() * real_metric_at(chart, q).G * D;
}

/// ||f*G - G||_F / ||G||_F at p.
inline double isometry_residual(const AntiholoMap& f, const PotentialChart& chart, const ChartPoint& p) {
  const Eigen::MatrixXd G = real_metric_at(chart, p).G;
  return (pullback_metric(f, chart, p) - G).norm() / G.norm();
}

/// ||f*omega + omega||_F / ||omega||_F at p.
inline double anti_isometry_residual(const AntiholoMap& f, const PotentialChart& chart, const ChartPoint& p) {
  const ChartPoint q = apply_map(f, chart, p);
  const Eigen::MatrixXd D = differential(f, p);
  const Eigen::MatrixXd pulled = D.transpose() * kahler_form_at(chart, q).omega * D;
  const Eigen::MatrixXd omega = kahler_form_at(chart, p).omega;
  return (pulled + omega).norm() / omega.norm();
}

/// |psi(f(p)) - psi(p)|.
inline double potential_invariance_residual(const AntiholoMap& f, const PotentialChart& chart, const ChartPoint& p) {
  const ChartPoint q = apply_map(f, chart, p);
  return std::abs(chart.potential_value(q) - chart.potential_value(p));
}

/// The chart with potential psi o f.  For anti-holomorphic f its metric is
/// the matrix of -f*omega.
inline PotentialChart pullback_potential(const AntiholoMap& f, const PotentialChart& chart) {
  if (f.dimension != chart.dimension()) throw std::invalid_argument("pullback_potential: dimension mismatch");
  auto domain = [f, chart](const ChartPoint& p) {
    if (!chart.contains(p)) return false;
    return chart.contains(apply_map(f, p));
  };
  const std::string label = chart.label() + "∘" + f.label;
  if (chart.potential()) {
    auto psi = [f, inner = chart.potential()](std::span<const CJet> z) {
      const std::vector<CJet> w = f.forward(z);
      return inner(w);
    };
    return PotentialChart::analytic(chart.dimension(), psi, domain, label);
  }
  auto psi = [f, inner = chart.black_box_potential()](std::span<const double> x) {
    const ChartPoint q = apply_map(f, ChartPoint::from_real(x));
    return inner(q.real_view());
  };
  return PotentialChart::black_box(chart.dimension(), psi, domain, label);
}

/// ||omega_{psi o f} - (-f*omega)||_F / ||omega||_F at p.
inline double pullback_consistency_residual(const AntiholoMap& f, const PotentialChart& chart, const ChartPoint& p) {
  const PotentialChart pulled = pullback_potential(f, chart);
  const ChartPoint q = apply_map(f, chart, p);
  const Eigen::MatrixXd D = differential(f, p);
  const Eigen::MatrixXd expected = -(D.transpose() * kahler_form_at(chart, q).omega * D);
  const Eigen::MatrixXd actual = kahler_form_at(pulled, p).omega;
  return (actual - expected).norm() / std::max(1e-300, expected.norm());
}

// ---------------------------------------------------------------------------
// Fixed loci

inline ChartPoint locus_point(const FixedLocusParam& locus, std::span<const double> t) {
  return detail::value_point(locus.param(parameter_jets(t, 0)));
}

/// d p / d t as a real 2n x n matrix.
inline Eigen::MatrixXd locus_jacobian(const FixedLocusParam& locus, std::span<const double> t) {
  return detail::real_jacobian(locus.param(parameter_jets(t, 1)));
}

/// ||f(p(t)) - p(t)||.
inline double fixed_locus_residual(const AntiholoMap& f, const FixedLocusParam& locus, std::span<const double> t) {
  const ChartPoint p = locus_point(locus, t);
  const ChartPoint q = apply_map(f, p);
  double s = 0.0;
  for (int j = 0; j < p.dim(); ++j) s += std::norm(q.holo()[j] - p.holo()[j]);
  return std::sqrt(s);
}

/// Smallest over largest singular value of the locus Jacobian (0 when rank < n).
inline double locus_rank_ratio(const FixedLocusParam& locus, std::span<const double> t) {
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(locus_jacobian(locus, t)).singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0.0;
  return sv(sv.size() - 1) / sv(0);
}

}  // namespace kreal
