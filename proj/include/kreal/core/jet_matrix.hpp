#pragma once

/// \file
/// Small dense matrices with jet entries: products, inverse and log-determinant
/// by truncated series around the base-point value.

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

#include "kreal/core/jet.hpp"

namespace kreal {

template <class T>
class JetMatrix {
 public:
  using Dense = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

  JetMatrix() = default;
  JetMatrix(int rows, int cols, const JetSpacePtr& space) : rows_(rows), cols_(cols) {
    data_.assign(static_cast<std::size_t>(rows * cols), Jet<T>(space));
  }
  /// A constant matrix embedded in `space`.
  JetMatrix(const Dense& m, const JetSpacePtr& space) : JetMatrix(static_cast<int>(m.rows()), static_cast<int>(m.cols()), space) {
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) (*this)(i, j) = Jet<T>(space, m(i, j));
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Jet<T>& operator()(int i, int j) { return data_[static_cast<std::size_t>(i * cols_ + j)]; }
  const Jet<T>& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i * cols_ + j)]; }
  const JetSpacePtr& space_ptr() const { return data_.front().space_ptr(); }

  Dense value() const {
    Dense m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).value();
    return m;
  }

  JetMatrix increment() const {
    JetMatrix r = *this;
    for (auto& e : r.data_) e = e.increment();
    return r;
  }

  friend JetMatrix operator*(const JetMatrix& a, const JetMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("JetMatrix product: shape mismatch");
    JetMatrix r(a.rows_, b.cols_, a.space_ptr());
    for (int i = 0; i < a.rows_; ++i)
      for (int j = 0; j < b.cols_; ++j)
        for (int k = 0; k < a.cols_; ++k) r(i, j) += a(i, k) * b(k, j);
    return r;
  }
  friend JetMatrix operator+(JetMatrix a, const JetMatrix& b) {
    for (std::size_t k = 0; k < a.data_.size(); ++k) a.data_[k] += b.data_[k];
    return a;
  }
  friend JetMatrix operator*(JetMatrix a, T s) {
    for (auto& e : a.data_) e *= s;
    return a;
  }

  Jet<T> trace() const {
    Jet<T> t(space_ptr());
    for (int i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Jet<T>> data_;
};

/// M^{-1} = sum_k (-M0^{-1} dM)^k M0^{-1}; exact to the jet order.
template <class T>
JetMatrix<T> inverse(const JetMatrix<T>& m) {
  using Dense = typename JetMatrix<T>::Dense;
  const auto& space = m.space_ptr();
  const Dense m0inv = m.value().inverse();
  const JetMatrix<T> base(m0inv, space);
  const JetMatrix<T> step = JetMatrix<T>(Dense(-m0inv), space) * m.increment();
  JetMatrix<T> term = base, sum = base;
  for (int k = 1; k <= space->order(); ++k) {
    term = step * term;
    sum = sum + term;
  }
  return sum;
}

/// log det M = log det M0 + sum_k (-1)^(k+1)/k tr((M0^{-1} dM)^k).
template <class T>
Jet<T> log_det(const JetMatrix<T>& m) {
  using Dense = typename JetMatrix<T>::Dense;
  const auto& space = m.space_ptr();
  const Dense m0 = m.value();
  const JetMatrix<T> a = JetMatrix<T>(Dense(m0.inverse()), space) * m.increment();
  Jet<T> r(space, std::log(m0.determinant()));
  JetMatrix<T> power = a;
  for (int k = 1; k <= space->order(); ++k) {
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    r += power.trace() * T(sign / k);
    if (k < space->order()) power = power * a;
  }
  return r;
}

}  // namespace kreal
