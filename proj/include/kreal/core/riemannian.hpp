#pragma once

/// \file
/// Levi-Civita connection and Riemann tensor of a real metric given as a jet
/// in its own coordinates.  Works in any dimension; used for the ambient real
/// pipeline and for induced metrics on parametrized submanifolds.
///
/// Curvature convention: R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y],
/// Rm(X,Y,Z,W) = G(R(X,Y)Z, W), Ric(Y,Z) = sum_a Rm(E_a,Y,Z,E_a).

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

#include "kreal/core/jet_matrix.hpp"

namespace kreal {

/// Christoffel symbols Gamma^k_ij as jets, layout (k * m + i) * m + j.
inline std::vector<RJet> christoffel_jets(const JetMatrix<double>& G) {
  const int m = G.rows();
  if (G.space_ptr()->order() < 1) throw OrderOverflow("Christoffel symbols need a metric jet of order >= 1");
  const JetMatrix<double> Ginv = inverse(G);
  // dG[c][(a, b)] = d_c G_ab
  std::vector<JetMatrix<double>> dG;
  const auto lower = JetSpace::get(G.space_ptr()->nvars(), G.space_ptr()->order() - 1);
  for (int c = 0; c < m; ++c) {
    JetMatrix<double> d(m, m, lower);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) d(a, b) = G(a, b).derivative(c);
    dG.push_back(std::move(d));
  }
  std::vector<RJet> gamma(static_cast<std::size_t>(m * m * m), RJet(lower));
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        RJet s(lower);
        for (int l = 0; l < m; ++l) {
          RJet first = dG[i](l, j) + dG[j](l, i) - dG[l](i, j);
          s += Ginv(k, l) * first;
        }
        s *= 0.5;
        gamma[static_cast<std::size_t>((k * m + i) * m + j)] = s;
        gamma[static_cast<std::size_t>((k * m + j) * m + i)] = s;
      }
  return gamma;
}

class RiemannianCurvature {
 public:
  RiemannianCurvature(int dim, Eigen::MatrixXd metric, std::vector<double> christoffel, std::vector<double> riemann)
      : dim_(dim), metric_(std::move(metric)), gamma_(std::move(christoffel)), rm_(std::move(riemann)) {}

  int dim() const { return dim_; }
  const Eigen::MatrixXd& metric() const { return metric_; }
  double christoffel(int k, int i, int j) const { return gamma_[static_cast<std::size_t>((k * dim_ + i) * dim_ + j)]; }
  double rm(int i, int j, int k, int l) const {
    return rm_[static_cast<std::size_t>(((i * dim_ + j) * dim_ + k) * dim_ + l)];
  }
  bool has_curvature() const { return !rm_.empty(); }

  double rm(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& z, const Eigen::VectorXd& w) const {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) {
        const double xy = x[i] * y[j];
        if (xy == 0.0) continue;
        for (int k = 0; k < dim_; ++k)
          for (int l = 0; l < dim_; ++l) s += xy * z[k] * w[l] * rm(i, j, k, l);
      }
    return s;
  }

  /// Ric_jk = sum_i R^i_{ijk}, from Rm by raising with the inverse metric.
  Eigen::MatrixXd ricci() const {
    const Eigen::MatrixXd inv = metric_.inverse();
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(dim_, dim_);
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k)
        for (int i = 0; i < dim_; ++i)
          for (int l = 0; l < dim_; ++l) r(j, k) += inv(i, l) * rm(i, j, k, l);
    return r;
  }

 private:
  int dim_;
  Eigen::MatrixXd metric_;
  std::vector<double> gamma_;
  std::vector<double> rm_;
};

/// Connection (order >= 1) and curvature (order >= 2) of a metric jet.
inline RiemannianCurvature riemannian_curvature(const JetMatrix<double>& G) {
  const int m = G.rows();
  const auto gamma = christoffel_jets(G);
  std::vector<double> gamma0(gamma.size());
  for (std::size_t k = 0; k < gamma.size(); ++k) gamma0[k] = gamma[k].value();
  const Eigen::MatrixXd G0 = G.value();
  std::vector<double> rm;
  if (G.space_ptr()->order() >= 2) {
    auto at = [&](int k, int i, int j) { return gamma0[static_cast<std::size_t>((k * m + i) * m + j)]; };
    auto dgamma = [&](int c, int k, int i, int j) {
      return gamma[static_cast<std::size_t>((k * m + i) * m + j)].coeff(unit_index(c));
    };
    // R^l_ijk = d_i Gamma^l_jk - d_j Gamma^l_ik + Gamma^l_ip Gamma^p_jk - Gamma^l_jp Gamma^p_ik
    std::vector<double> rup(static_cast<std::size_t>(m * m * m * m));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
          for (int l = 0; l < m; ++l) {
            double v = dgamma(i, l, j, k) - dgamma(j, l, i, k);
            for (int p = 0; p < m; ++p) v += at(l, i, p) * at(p, j, k) - at(l, j, p) * at(p, i, k);
            rup[static_cast<std::size_t>(((i * m + j) * m + k) * m + l)] = v;
          }
    rm.assign(rup.size(), 0.0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
          for (int l = 0; l < m; ++l) {
            double v = 0.0;
            for (int q = 0; q < m; ++q) v += rup[static_cast<std::size_t>(((i * m + j) * m + k) * m + q)] * G0(q, l);
            rm[static_cast<std::size_t>(((i * m + j) * m + k) * m + l)] = v;
          }
  }
  return RiemannianCurvature(m, G0, std::move(gamma0), std::move(rm));
}

}  // namespace kreal
