#pragma once

// Independent reference computations used by the tests.  None of these go
// through the library's product tables or curvature formulas.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <vector>

#include "kreal/kreal.hpp"

namespace oracle {

using kreal::MultiIndex;
using cplx = std::complex<double>;

// Dense truncated polynomial as a sparse map, multiplied by brute-force convolution.
struct Poly {
  int order = 4;
  std::map<MultiIndex, double> c;

  Poly operator+(const Poly& o) const {
    Poly r = *this;
    for (const auto& [a, v] : o.c) r.c[a] += v;
    return r;
  }
  Poly operator*(const Poly& o) const {
    Poly r;
    r.order = std::min(order, o.order);
    for (const auto& [a, x] : c)
      for (const auto& [b, y] : o.c) {
        MultiIndex s{};
        int deg = 0;
        for (int v = 0; v < kreal::kMaxJetVars; ++v) {
          s[v] = static_cast<std::uint8_t>(a[v] + b[v]);
          deg += s[v];
        }
        if (deg <= r.order) r.c[s] += x * y;
      }
    return r;
  }
  Poly scaled(double s) const {
    Poly r = *this;
    for (auto& [a, v] : r.c) v *= s;
    return r;
  }
};

inline Poly random_poly(std::mt19937_64& rng, int nvars, int order) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Poly p;
  p.order = order;
  const auto space = kreal::JetSpace::get(nvars, order);
  for (std::size_t k = 0; k < space->size(); ++k) p.c[space->monomial(k)] = u(rng);
  return p;
}

inline kreal::RJet to_jet(const Poly& p, int nvars) {
  kreal::RJet j(kreal::JetSpace::get(nvars, p.order));
  for (const auto& [a, v] : p.c) {
    const long k = j.space().find(a);
    if (k >= 0) j.coeffs()[static_cast<std::size_t>(k)] += v;
  }
  return j;
}

inline double max_diff(const kreal::RJet& j, const Poly& p) {
  double d = 0.0;
  for (std::size_t k = 0; k < j.space().size(); ++k) {
    const auto it = p.c.find(j.space().monomial(k));
    const double ref = it == p.c.end() ? 0.0 : it->second;
    d = std::max(d, std::abs(j.coeffs()[k] - ref));
  }
  return d;
}

// Fubini-Study Hermitian metric from its closed form
// g_ab = delta_ab / (1 + |w|^2) - conj(w_a) w_b / (1 + |w|^2)^2.
inline Eigen::MatrixXcd fubini_study(const std::vector<cplx>& w) {
  const int n = static_cast<int>(w.size());
  double s = 1.0;
  for (const auto& x : w) s += std::norm(x);
  Eigen::MatrixXcd g(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) g(a, b) = (a == b ? 1.0 / s : 0.0) - std::conj(w[a]) * w[b] / (s * s);
  return g;
}

// Gaussian curvature of a 2D metric E du^2 + 2F du dv + G dv^2 (Brioschi).
// E, F, G are jets in (u, v) of order >= 2.
inline double brioschi(const kreal::RJet& E, const kreal::RJet& F, const kreal::RJet& G) {
  auto d = [](const kreal::RJet& f, int a, int b) {
    MultiIndex m{};
    m[0] = static_cast<std::uint8_t>(a);
    m[1] = static_cast<std::uint8_t>(b);
    return f.partial(m);
  };
  const double e = E.value(), f = F.value(), g = G.value();
  Eigen::Matrix3d A, B;
  A << -0.5 * d(E, 0, 2) + d(F, 1, 1) - 0.5 * d(G, 2, 0), 0.5 * d(E, 1, 0), d(F, 1, 0) - 0.5 * d(E, 0, 1),
      d(F, 0, 1) - 0.5 * d(G, 1, 0), e, f,  //
      0.5 * d(G, 0, 1), f, g;
  B << 0.0, 0.5 * d(E, 0, 1), 0.5 * d(G, 1, 0),  //
      0.5 * d(E, 0, 1), e, f,                    //
      0.5 * d(G, 1, 0), f, g;
  const double w = e * g - f * f;
  return (A.determinant() - B.determinant()) / (w * w);
}

// Induced metric on the real slice of Fubini-Study CP^2 in closed form:
// h_ab(t) = 2 [(1 + |t|^2) delta_ab - t_a t_b] / (1 + |t|^2)^2, as jets in t.
inline std::array<kreal::RJet, 3> rp2_induced_metric(double t1, double t2) {
  const auto space = kreal::JetSpace::get(2, 2);
  const kreal::RJet u = kreal::RJet::variable(space, 0, t1), v = kreal::RJet::variable(space, 1, t2);
  const kreal::RJet s = 1.0 + u * u + v * v;
  const kreal::RJet inv = 1.0 / (s * s);
  return {2.0 * (s - u * u) * inv, -2.0 * u * v * inv, 2.0 * (s - v * v) * inv};
}

// Intrinsic Ricci of the induced metric h_ab(t) = <dp/dt_a, dp/dt_b>_G on a
// parametrized locus, from its own Christoffel symbols in t, evaluated on the
// locus frame: entries (a, b) = Ric_h(e_a, e_b).
inline Eigen::MatrixXd induced_ricci(const kreal::PotentialChart& chart, const kreal::FixedLocusParam& locus,
                                     const std::vector<double>& t) {
  const int n = chart.dimension();
  const auto f = kreal::frame_field_jets(chart, locus, t, 2);
  kreal::JetMatrix<double> h(n, n, f.metric.space_ptr());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      kreal::RJet s(f.metric.space_ptr());
      for (int i = 0; i < 2 * n; ++i)
        for (int j = 0; j < 2 * n; ++j)
          s += f.basis[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] * f.metric(i, j) *
               f.basis[static_cast<std::size_t>(b)][static_cast<std::size_t>(j)];
      h(a, b) = s;
    }
  const Eigen::MatrixXd ric_t = kreal::riemannian_curvature(h).ricci();
  const auto lp = kreal::build_frame(chart, locus, t);
  return lp.coefficients.transpose() * ric_t * lp.coefficients;
}

}  // namespace oracle
