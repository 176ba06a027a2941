#pragma once

/// \file
/// Truncated multivariate Taylor polynomials ("jets") and their arithmetic.
///
/// A Jet<T> stores the coefficients c_a of
///   f(x0 + dx) = sum_{|a| <= K} c_a dx^a,
/// so c_a is the a-th partial derivative of f at x0 divided by a!.  All
/// operations are exact truncated-polynomial arithmetic: there is no step size
/// anywhere, and derivatives up to the stored order are exact up to rounding.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace kreal {

inline constexpr int kMaxJetVars = 8;
inline constexpr int kMaxJetOrder = 4;

using cplx = std::complex<double>;
using MultiIndex = std::array<std::uint8_t, kMaxJetVars>;

class OrderOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline int total_degree(const MultiIndex& a) {
  int d = 0;
  for (auto v : a) d += v;
  return d;
}

inline double multi_factorial(const MultiIndex& a) {
  static constexpr double fact[] = {1, 1, 2, 6, 24, 120, 720, 5040, 40320};
  double r = 1.0;
  for (auto v : a) r *= fact[v];
  return r;
}

inline MultiIndex unit_index(int var, int power = 1) {
  MultiIndex a{};
  a[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(power);
  return a;
}

/// Monomial layout and product/derivative tables shared by all jets with the
/// same (variable count, order).  Instances are immutable and cached.
class JetSpace {
 public:
  struct ProductTerm {
    std::uint32_t lhs, rhs, out;
  };
  struct DerivativeTerm {
    std::uint32_t src, dst;
    double factor;
  };

  static std::shared_ptr<const JetSpace> get(int nvars, int order) {
    if (nvars < 0 || nvars > kMaxJetVars)
      throw std::invalid_argument("jet variable count out of range: " + std::to_string(nvars));
    if (order < 0 || order > kMaxJetOrder)
      throw OrderOverflow("jet order out of range: " + std::to_string(order));
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::shared_ptr<const JetSpace>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{nvars, order}];
    if (!slot) slot = std::shared_ptr<const JetSpace>(new JetSpace(nvars, order));
    return slot;
  }

  int nvars() const { return nvars_; }
  int order() const { return order_; }
  std::size_t size() const { return monomials_.size(); }
  const MultiIndex& monomial(std::size_t k) const { return monomials_[k]; }
  int degree(std::size_t k) const { return degrees_[k]; }

  /// Position of a multi-index, or -1 when its degree exceeds the order.
  long find(const MultiIndex& a) const {
    auto it = lookup_.find(encode(a));
    return it == lookup_.end() ? -1 : static_cast<long>(it->second);
  }

  std::span<const ProductTerm> products() const { return products_; }

  /// Terms of d/dx_var mapping this space into the space one order lower.
  std::span<const DerivativeTerm> derivative_terms(int var) const {
    return derivatives_[static_cast<std::size_t>(var)];
  }

 private:
  JetSpace(int nvars, int order) : nvars_(nvars), order_(order) {
    MultiIndex current{};
    for (int d = 0; d <= order; ++d) enumerate(current, 0, d);
    for (std::size_t k = 0; k < monomials_.size(); ++k) {
      degrees_.push_back(total_degree(monomials_[k]));
      lookup_.emplace(encode(monomials_[k]), static_cast<std::uint32_t>(k));
    }
    for (std::size_t i = 0; i < size(); ++i) {
      for (std::size_t j = 0; j < size(); ++j) {
        if (degrees_[i] + degrees_[j] > order) continue;
        MultiIndex s{};
        for (int v = 0; v < kMaxJetVars; ++v)
          s[v] = static_cast<std::uint8_t>(monomials_[i][v] + monomials_[j][v]);
        products_.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                             lookup_.at(encode(s))});
      }
    }
    derivatives_.resize(static_cast<std::size_t>(nvars));
    if (order == 0) return;
    // The target space has order - 1; its layout is the prefix of ours.
    for (int v = 0; v < nvars; ++v) {
      for (std::size_t k = 0; k < size(); ++k) {
        const auto& a = monomials_[k];
        if (a[v] == 0) continue;
        MultiIndex b = a;
        --b[v];
        derivatives_[v].push_back({static_cast<std::uint32_t>(k), lookup_.at(encode(b)),
                                   static_cast<double>(a[v])});
      }
    }
  }

  // Graded order: all monomials of degree d before degree d + 1, so a lower
  // order layout is a prefix of a higher one.
  void enumerate(MultiIndex& current, int var, int remaining) {
    if (var == nvars_ - 1 || nvars_ == 0) {
      if (nvars_ == 0) {
        if (remaining == 0) monomials_.push_back(current);
        return;
      }
      current[var] = static_cast<std::uint8_t>(remaining);
      monomials_.push_back(current);
      current[var] = 0;
      return;
    }
    for (int p = remaining; p >= 0; --p) {
      current[var] = static_cast<std::uint8_t>(p);
      enumerate(current, var + 1, remaining - p);
    }
    current[var] = 0;
  }

  static std::uint32_t encode(const MultiIndex& a) {
    std::uint32_t key = 0;
    for (int v = kMaxJetVars - 1; v >= 0; --v) key = key * (kMaxJetOrder + 1) + a[v];
    return key;
  }

  int nvars_;
  int order_;
  std::vector<MultiIndex> monomials_;
  std::vector<int> degrees_;
  std::unordered_map<std::uint32_t, std::uint32_t> lookup_;
  std::vector<ProductTerm> products_;
  std::vector<std::vector<DerivativeTerm>> derivatives_;
};

using JetSpacePtr = std::shared_ptr<const JetSpace>;

template <class T>
class Jet {
 public:
  using value_type = T;

  Jet() = default;
  explicit Jet(JetSpacePtr space, T value = T{}) : space_(std::move(space)), c_(space_->size(), T{}) {
    c_[0] = value;
  }

  /// The coordinate function x_var seeded at `at`.
  static Jet variable(JetSpacePtr space, int var, T at) {
    Jet j(std::move(space), at);
    if (j.space_->order() >= 1) j.c_[static_cast<std::size_t>(j.space_->find(unit_index(var)))] = T{1};
    return j;
  }

  const JetSpacePtr& space_ptr() const { return space_; }
  const JetSpace& space() const { return *space_; }
  int order() const { return space_->order(); }
  int nvars() const { return space_->nvars(); }
  bool empty() const { return !space_; }

  T value() const { return c_[0]; }
  std::span<const T> coeffs() const { return c_; }
  std::span<T> coeffs() { return c_; }

  /// Taylor coefficient of dx^a; zero above the stored order.
  T coeff(const MultiIndex& a) const {
    long k = space_->find(a);
    return k < 0 ? T{} : c_[static_cast<std::size_t>(k)];
  }

  /// The a-th partial derivative at the base point.
  T partial(const MultiIndex& a) const {
    if (total_degree(a) > order())
      throw OrderOverflow("partial derivative of order " + std::to_string(total_degree(a)) +
                          " requested from a jet of order " + std::to_string(order()));
    return coeff(a) * multi_factorial(a);
  }

  /// d/dx_var as a jet one order lower.
  Jet derivative(int var) const {
    if (order() == 0) throw OrderOverflow("cannot differentiate an order-0 jet");
    Jet r(JetSpace::get(nvars(), order() - 1));
    for (const auto& t : space_->derivative_terms(var)) r.c_[t.dst] += t.factor * c_[t.src];
    return r;
  }

  Jet truncated(int new_order) const {
    if (new_order >= order()) return *this;
    Jet r(JetSpace::get(nvars(), new_order));
    std::copy_n(c_.begin(), r.c_.size(), r.c_.begin());
    return r;
  }

  /// Same jet with the constant term removed.
  Jet increment() const {
    Jet r = *this;
    r.c_[0] = T{};
    return r;
  }

  Jet operator-() const {
    Jet r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
  }

  Jet& operator+=(const Jet& o) {
    if (space_ != o.space_) return *this = sum(*this, o, 1.0);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    if (space_ != o.space_) return *this = sum(*this, o, -1.0);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator/=(const Jet& o) { return *this = *this / o; }

  Jet& operator+=(T s) {
    c_[0] += s;
    return *this;
  }
  Jet& operator-=(T s) {
    c_[0] -= s;
    return *this;
  }
  Jet& operator*=(T s) {
    for (auto& v : c_) v *= s;
    return *this;
  }
  Jet& operator/=(T s) {
    for (auto& v : c_) v /= s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b) {
    if (a.space_ != b.space_) {
      auto [x, y] = common(a, b);
      return x * y;
    }
    Jet r(a.space_);
    r.c_[0] = T{};
    for (const auto& t : a.space_->products()) r.c_[t.out] += a.c_[t.lhs] * b.c_[t.rhs];
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

  friend Jet operator+(Jet a, T s) { return a += s; }
  friend Jet operator+(T s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, T s) { return a -= s; }
  friend Jet operator-(T s, const Jet& a) { return -a + s; }
  friend Jet operator*(Jet a, T s) { return a *= s; }
  friend Jet operator*(T s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, T s) { return a /= s; }
  friend Jet operator/(T s, const Jet& a) { return reciprocal(a) * s; }

  /// f(u) from the Taylor coefficients taylor[k] = f^(k)(u0) / k! at u0 = u.value().
  friend Jet compose_scalar(const Jet& u, const std::array<T, kMaxJetOrder + 1>& taylor) {
    const Jet du = u.increment();
    Jet r(u.space_, taylor[static_cast<std::size_t>(u.order())]);
    for (int k = u.order() - 1; k >= 0; --k) {
      r = r * du;
      r.c_[0] += taylor[static_cast<std::size_t>(k)];
    }
    return r;
  }

  friend Jet reciprocal(const Jet& u) {
    const T u0 = u.value();
    if (u0 == T{}) throw std::domain_error("jet reciprocal of a zero value");
    std::array<T, kMaxJetOrder + 1> t{};
    T inv = T{1} / u0, p = inv;
    for (int k = 0; k <= kMaxJetOrder; ++k) {
      t[k] = (k % 2 == 0 ? p : -p);
      p *= inv;
    }
    return compose_scalar(u, t);
  }

 private:
  // Mixed orders over the same variables meet at the lower order.
  static std::pair<Jet, Jet> common(const Jet& a, const Jet& b) {
    if (a.nvars() != b.nvars())
      throw std::invalid_argument("jets over different variable sets cannot be combined");
    int o = std::min(a.order(), b.order());
    return {a.truncated(o), b.truncated(o)};
  }
  static Jet sum(const Jet& a, const Jet& b, double sign) {
    auto [x, y] = common(a, b);
    for (std::size_t k = 0; k < x.c_.size(); ++k) x.c_[k] += sign * y.c_[k];
    return x;
  }

  template <class U>
  friend class Jet;

  JetSpacePtr space_;
  std::vector<T> c_;
};

using RJet = Jet<double>;
using CJet = Jet<cplx>;

namespace detail {
inline constexpr double kInvFactorial[] = {1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0};

template <class T>
T generalized_binomial(T p, int k) {
  T r{1};
  for (int i = 0; i < k; ++i) r *= (p - T(static_cast<double>(i))) / T(static_cast<double>(i + 1));
  return r;
}
}  // namespace detail

template <class T>
Jet<T> exp(const Jet<T>& u) {
  std::array<T, kMaxJetOrder + 1> t{};
  const T e = std::exp(u.value());
  for (int k = 0; k <= kMaxJetOrder; ++k) t[k] = e * detail::kInvFactorial[k];
  return compose_scalar(u, t);
}

template <class T>
Jet<T> log(const Jet<T>& u) {
  const T u0 = u.value();
  if (u0 == T{}) throw std::domain_error("jet log of zero");
  if constexpr (std::is_same_v<T, double>)
    if (u0 < 0) throw std::domain_error("jet log of a negative real value");
  std::array<T, kMaxJetOrder + 1> t{};
  t[0] = std::log(u0);
  T p = T{1};
  for (int k = 1; k <= kMaxJetOrder; ++k) {
    p /= u0;
    t[k] = (k % 2 == 1 ? p : -p) / static_cast<double>(k);
  }
  return compose_scalar(u, t);
}

/// Principal branch for complex values.
template <class T>
Jet<T> pow(const Jet<T>& u, T p) {
  const T u0 = u.value();
  if (u0 == T{}) throw std::domain_error("jet pow at zero");
  std::array<T, kMaxJetOrder + 1> t{};
  for (int k = 0; k <= kMaxJetOrder; ++k)
    t[k] = detail::generalized_binomial(p, k) * std::pow(u0, p - T(static_cast<double>(k)));
  return compose_scalar(u, t);
}

template <class T>
Jet<T> sqrt(const Jet<T>& u) {
  const T u0 = u.value();
  if (u0 == T{}) throw std::domain_error("jet sqrt at zero");
  const T s = std::sqrt(u0);
  std::array<T, kMaxJetOrder + 1> t{};
  T up = s;
  for (int k = 0; k <= kMaxJetOrder; ++k) {
    t[k] = detail::generalized_binomial(T{0.5}, k) * up;
    up /= u0;
  }
  return compose_scalar(u, t);
}

template <class T>
Jet<T> sin(const Jet<T>& u) {
  const T s = std::sin(u.value()), c = std::cos(u.value());
  const T d[] = {s, c, -s, -c, s};
  std::array<T, kMaxJetOrder + 1> t{};
  for (int k = 0; k <= kMaxJetOrder; ++k) t[k] = d[k] * detail::kInvFactorial[k];
  return compose_scalar(u, t);
}

template <class T>
Jet<T> cos(const Jet<T>& u) {
  const T s = std::sin(u.value()), c = std::cos(u.value());
  const T d[] = {c, -s, -c, s, c};
  std::array<T, kMaxJetOrder + 1> t{};
  for (int k = 0; k <= kMaxJetOrder; ++k) t[k] = d[k] * detail::kInvFactorial[k];
  return compose_scalar(u, t);
}

/// Integer power by repeated multiplication; exact for any base sign.
template <class T>
Jet<T> ipow(const Jet<T>& u, int p) {
  if (p < 0) return reciprocal(ipow(u, -p));
  Jet<T> r(u.space_ptr(), T{1});
  Jet<T> b = u;
  while (p > 0) {
    if (p & 1) r = r * b;
    p >>= 1;
    if (p) b = b * b;
  }
  return r;
}

// Complex-valued jets in real variables: conjugation acts on coefficients.
inline CJet conj(const CJet& u) {
  CJet r = u;
  for (auto& v : r.coeffs()) v = std::conj(v);
  return r;
}

inline RJet real_part(const CJet& u) {
  RJet r(u.space_ptr());
  for (std::size_t k = 0; k < u.coeffs().size(); ++k) r.coeffs()[k] = u.coeffs()[k].real();
  return r;
}

inline RJet imag_part(const CJet& u) {
  RJet r(u.space_ptr());
  for (std::size_t k = 0; k < u.coeffs().size(); ++k) r.coeffs()[k] = u.coeffs()[k].imag();
  return r;
}

inline CJet to_complex(const RJet& u) {
  CJet r(u.space_ptr());
  for (std::size_t k = 0; k < u.coeffs().size(); ++k) r.coeffs()[k] = u.coeffs()[k];
  return r;
}

inline CJet abs2(const CJet& u) { return to_complex(real_part(u * conj(u))); }

/// Substitute jets for the variables of a polynomial.
///
/// `base` is a jet in m variables around x0; `shifts[i]` is a jet (in some
/// other variable set) whose constant term is ignored and whose increment is
/// x_i - x0_i.  The result is base(x0 + shifts) truncated at the order of the
/// shift jets.
template <class T>
Jet<T> compose(const Jet<T>& base, std::span<const Jet<T>> shifts) {
  if (static_cast<int>(shifts.size()) != base.nvars())
    throw std::invalid_argument("compose: shift count does not match jet variables");
  if (shifts.empty()) throw std::invalid_argument("compose: no shift jets");
  const auto& target = shifts.front().space_ptr();
  const int m = base.nvars();
  // powers[i][p] = (shift_i increment)^p
  std::vector<std::vector<Jet<T>>> powers(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    auto& row = powers[static_cast<std::size_t>(i)];
    row.emplace_back(target, T{1});
    const Jet<T> d = shifts[static_cast<std::size_t>(i)].increment();
    for (int p = 1; p <= base.order(); ++p) row.push_back(row.back() * d);
  }
  Jet<T> r(target);
  for (std::size_t k = 0; k < base.space().size(); ++k) {
    const T c = base.coeffs()[k];
    if (c == T{}) continue;
    const auto& a = base.space().monomial(k);
    Jet<T> term(target, c);
    for (int i = 0; i < m; ++i)
      if (a[static_cast<std::size_t>(i)] > 0) term = term * powers[static_cast<std::size_t>(i)][a[i]];
    r += term;
  }
  return r;
}

}  // namespace kreal
