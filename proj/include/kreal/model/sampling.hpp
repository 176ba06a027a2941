#pragma once

/// \file
/// Deterministic low-discrepancy sampling of boxes.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace kreal {

inline double radical_inverse(std::uint64_t index, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

/// Uniform double in [0, 1) from the raw 64-bit engine output; unlike
/// std::uniform_real_distribution this is identical across standard libraries.
inline double unit_double(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Halton points with a seeded Cranley-Patterson rotation, mapped into a box
/// shrunk by `margin` (a fraction of each side) on both ends.
class HaltonSampler {
 public:
  HaltonSampler(std::vector<double> lower, std::vector<double> upper, std::uint64_t seed, double margin = 0.05)
      : lower_(std::move(lower)), upper_(std::move(upper)), margin_(margin) {
    static constexpr unsigned primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    if (lower_.size() != upper_.size()) throw std::invalid_argument("sampling box bounds differ in length");
    if (lower_.size() > std::size(primes)) throw std::invalid_argument("sampling box dimension too large");
    std::mt19937_64 rng(seed);
    for (std::size_t d = 0; d < lower_.size(); ++d) {
      bases_.push_back(primes[d]);
      shift_.push_back(unit_double(rng));
    }
  }

  std::size_t dim() const { return lower_.size(); }

  std::vector<double> point(std::uint64_t index) const {
    std::vector<double> x(dim());
    for (std::size_t d = 0; d < dim(); ++d) {
      double u = radical_inverse(index + 1, bases_[d]) + shift_[d];
      u -= std::floor(u);
      const double w = upper_[d] - lower_[d];
      const double lo = lower_[d] + margin_ * w, hi = upper_[d] - margin_ * w;
      x[d] = lo + u * (hi - lo);
    }
    return x;
  }

 private:
  std::vector<double> lower_, upper_;
  double margin_;
  std::vector<unsigned> bases_;
  std::vector<double> shift_;
};

}  // namespace kreal
