#pragma once

/// \file
/// Chart points, real tangent vectors, the complex structure and Wirtinger
/// derivatives of jets.
///
/// Conventions used throughout the library:
///   * real coordinates are ordered (x1, y1, x2, y2, ...) with z_j = x_j + i y_j;
///   * the complex structure is J d/dx_j = d/dy_j, J d/dy_j = -d/dx_j.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kreal/core/jet.hpp"

namespace kreal {

class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point of an open chart in C^n, with its real coordinates.
class ChartPoint {
 public:
  ChartPoint() = default;
  explicit ChartPoint(std::vector<cplx> holo) : holo_(std::move(holo)) {
    real_.reserve(2 * holo_.size());
    for (const auto& z : holo_) {
      real_.push_back(z.real());
      real_.push_back(z.imag());
    }
  }

  static ChartPoint from_real(std::span<const double> real_view) {
    if (real_view.size() % 2 != 0) throw std::invalid_argument("real view must have even length");
    std::vector<cplx> z(real_view.size() / 2);
    for (std::size_t j = 0; j < z.size(); ++j) z[j] = {real_view[2 * j], real_view[2 * j + 1]};
    return ChartPoint(std::move(z));
  }

  int dim() const { return static_cast<int>(holo_.size()); }
  int real_dim() const { return 2 * dim(); }
  const std::vector<cplx>& holo() const { return holo_; }
  const std::vector<double>& real_view() const { return real_; }

  friend bool operator==(const ChartPoint&, const ChartPoint&) = default;

 private:
  std::vector<cplx> holo_;
  std::vector<double> real_;
};

/// Components in the real coordinate basis (d/dx1, d/dy1, ...).
using RealTangent = Eigen::VectorXd;

inline RealTangent apply_J(const RealTangent& v) {
  if (v.size() % 2 != 0) throw std::invalid_argument("apply_J: odd component count");
  RealTangent r(v.size());
  for (Eigen::Index j = 0; j < v.size() / 2; ++j) {
    r[2 * j] = -v[2 * j + 1];
    r[2 * j + 1] = v[2 * j];
  }
  return r;
}

/// Matrix of J in the real coordinate basis.
inline Eigen::MatrixXd complex_structure(int n) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    J(2 * j + 1, 2 * j) = 1.0;
    J(2 * j, 2 * j + 1) = -1.0;
  }
  return J;
}

/// Holomorphic components v^j = dz^j(v) = v_xj + i v_yj.
inline Eigen::VectorXcd holomorphic_components(const RealTangent& v) {
  Eigen::VectorXcd h(v.size() / 2);
  for (Eigen::Index j = 0; j < h.size(); ++j) h[j] = {v[2 * j], v[2 * j + 1]};
  return h;
}

/// A scalar field given as a function of the holomorphic coordinate jets z_j.
/// Real-valued fields return a complex jet whose imaginary part is ignored.
using ScalarField = std::function<CJet(std::span<const CJet>)>;

/// A vector-valued field of complex coordinate jets (maps, parametrizations).
using VectorField = std::function<std::vector<CJet>(std::span<const CJet>)>;

/// A black-box real function of the real coordinates (finite-difference route).
using BlackBoxField = std::function<double(std::span<const double>)>;

/// z_j = x_j + i y_j as jets in the 2n real variables around p.
inline std::vector<CJet> coordinate_jets(const ChartPoint& p, int order) {
  auto space = JetSpace::get(p.real_dim(), order);
  std::vector<CJet> z;
  z.reserve(static_cast<std::size_t>(p.dim()));
  for (int j = 0; j < p.dim(); ++j) {
    CJet zj = CJet::variable(space, 2 * j, p.holo()[static_cast<std::size_t>(j)]);
    if (order >= 1) zj.coeffs()[static_cast<std::size_t>(space->find(unit_index(2 * j + 1)))] = cplx{0, 1};
    z.push_back(std::move(zj));
  }
  return z;
}

/// Real parameters t_a as (complex-typed) jets in n real variables.
inline std::vector<CJet> parameter_jets(std::span<const double> t, int order) {
  auto space = JetSpace::get(static_cast<int>(t.size()), order);
  std::vector<CJet> r;
  for (std::size_t a = 0; a < t.size(); ++a) r.push_back(CJet::variable(space, static_cast<int>(a), t[a]));
  return r;
}

/// The real-coordinate Taylor jet of a scalar field at p, exact to `order`.
inline RJet lift_to_jet(const ScalarField& field, const ChartPoint& p, int order = kMaxJetOrder) {
  const auto z = coordinate_jets(p, order);
  CJet v;
  try {
    v = field(z);
  } catch (const std::domain_error& e) {
    throw DomainError(std::string("field is singular at the requested point: ") + e.what());
  }
  if (!std::isfinite(v.value().real())) throw DomainError("field is not finite at the requested point");
  return real_part(v);
}

namespace detail {
// Expand a product of Wirtinger operators into real partials.
inline std::map<MultiIndex, cplx> wirtinger_expansion(std::span<const int> holo, std::span<const int> antiholo) {
  std::map<MultiIndex, cplx> ops{{MultiIndex{}, cplx{1.0}}};
  auto apply = [&](int j, double ysign) {
    std::map<MultiIndex, cplx> next;
    for (const auto& [a, c] : ops) {
      MultiIndex ax = a, ay = a;
      ++ax[static_cast<std::size_t>(2 * j)];
      ++ay[static_cast<std::size_t>(2 * j + 1)];
      next[ax] += 0.5 * c;
      next[ay] += cplx{0.0, 0.5 * ysign} * c;
    }
    ops = std::move(next);
  };
  for (int j : holo) apply(j, -1.0);
  for (int k : antiholo) apply(k, +1.0);
  return ops;
}
}  // namespace detail

/// Mixed Wirtinger derivative d_{z_holo...} d_{zbar_antiholo...} at the base point,
/// with d_z = (d_x - i d_y)/2 and d_zbar = (d_x + i d_y)/2.
template <class T>
cplx wirtinger(const Jet<T>& jet, std::span<const int> holo, std::span<const int> antiholo) {
  const int total = static_cast<int>(holo.size() + antiholo.size());
  if (total > jet.order())
    throw OrderOverflow("Wirtinger derivative of order " + std::to_string(total) + " exceeds jet order " +
                        std::to_string(jet.order()));
  cplx r{0.0};
  for (const auto& [a, c] : detail::wirtinger_expansion(holo, antiholo)) r += c * cplx(jet.partial(a));
  return r;
}

inline cplx wirtinger(const RJet& jet, std::initializer_list<int> holo, std::initializer_list<int> antiholo) {
  return wirtinger(jet, std::span<const int>(holo.begin(), holo.size()),
                   std::span<const int>(antiholo.begin(), antiholo.size()));
}
inline cplx wirtinger(const CJet& jet, std::initializer_list<int> holo, std::initializer_list<int> antiholo) {
  return wirtinger(jet, std::span<const int>(holo.begin(), holo.size()),
                   std::span<const int>(antiholo.begin(), antiholo.size()));
}

/// d_{z_j} (or d_{zbar_j} when `anti`) of a jet, one order lower.
inline CJet wirtinger_jet(const CJet& jet, int j, bool anti) {
  const CJet dx = jet.derivative(2 * j);
  const CJet dy = jet.derivative(2 * j + 1);
  return (dx + dy * cplx{0.0, anti ? 1.0 : -1.0}) * cplx{0.5};
}

/// Finite-difference jet of a black-box field: central tensor-product stencils
/// with one Richardson step, h = eps^(1/6) * scale.  Markedly less accurate
/// than the analytic route (fourth derivatives carry ~1e-5 relative error).
inline RJet lift_to_jet_fd(const BlackBoxField& field, const ChartPoint& p, double scale = 1.0,
                           int order = kMaxJetOrder) {
  const int m = p.real_dim();
  auto space = JetSpace::get(m, order);
  const auto& x0 = p.real_view();
  // 1-D central stencils (offset, weight) for derivative orders 0..4; O(h^2).
  static const std::vector<std::pair<int, double>> stencils[] = {
      {{0, 1.0}},
      {{-1, -0.5}, {1, 0.5}},
      {{-1, 1.0}, {0, -2.0}, {1, 1.0}},
      {{-2, -0.5}, {-1, 1.0}, {1, -1.0}, {2, 0.5}},
      {{-2, 1.0}, {-1, -4.0}, {0, 6.0}, {1, -4.0}, {2, 1.0}},
  };
  std::vector<double> x(x0);
  auto estimate = [&](const MultiIndex& a, double h) {
    std::vector<int> vars;
    for (int v = 0; v < m; ++v)
      if (a[static_cast<std::size_t>(v)] > 0) vars.push_back(v);
    double acc = 0.0;
    std::function<void(std::size_t, double)> rec = [&](std::size_t k, double w) {
      if (k == vars.size()) {
        acc += w * field(x);
        return;
      }
      const int v = vars[k];
      for (const auto& [off, wt] : stencils[a[static_cast<std::size_t>(v)]]) {
        x[static_cast<std::size_t>(v)] = x0[static_cast<std::size_t>(v)] + off * h;
        rec(k + 1, w * wt);
      }
      x[static_cast<std::size_t>(v)] = x0[static_cast<std::size_t>(v)];
    };
    rec(0, 1.0);
    return acc / std::pow(h, total_degree(a));
  };
  const double h = std::pow(std::numeric_limits<double>::epsilon(), 1.0 / 6.0) * scale;
  RJet r(space);
  for (std::size_t k = 0; k < space->size(); ++k) {
    const auto& a = space->monomial(k);
    double d;
    if (total_degree(a) == 0) {
      d = field(x0);
    } else {
      const double coarse = estimate(a, h);
      const double fine = estimate(a, 0.5 * h);
      d = (4.0 * fine - coarse) / 3.0;
    }
    r.coeffs()[k] = d / multi_factorial(a);
  }
  return r;
}

}  // namespace kreal
