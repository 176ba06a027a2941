#pragma once

#include <random>
#include <string>
#include <vector>

#include "kreal/kreal.hpp"

namespace fixture {

// Admitted Halton points of a bundle's ambient box.
inline std::vector<kreal::ChartPoint> ambient_points(const kreal::ManifoldBundle& b, int count, std::uint64_t seed = 7) {
  kreal::HaltonSampler s(b.domain_lower, b.domain_upper, seed);
  std::vector<kreal::ChartPoint> out;
  for (int k = 0; static_cast<int>(out.size()) < count && k < 50 * count; ++k) {
    const auto p = kreal::ChartPoint::from_real(s.point(static_cast<std::uint64_t>(k)));
    if (b.chart.contains(p)) out.push_back(p);
  }
  return out;
}

// Halton parameters of a bundle's locus box whose image lies in the chart.
inline std::vector<std::vector<double>> locus_params(const kreal::ManifoldBundle& b, int count, std::uint64_t seed = 11) {
  kreal::HaltonSampler s(b.locus->lower, b.locus->upper, seed);
  std::vector<std::vector<double>> out;
  for (int k = 0; static_cast<int>(out.size()) < count && k < 50 * count; ++k) {
    auto t = s.point(static_cast<std::uint64_t>(k));
    if (b.chart.contains(kreal::locus_point(*b.locus, t))) out.push_back(std::move(t));
  }
  return out;
}

inline kreal::RealTangent random_vector(std::mt19937_64& rng, int m) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  kreal::RealTangent v(m);
  for (int i = 0; i < m; ++i) v[i] = u(rng);
  return v;
}

inline kreal::PotentialChart chart_from(const std::string& potential, int n, double half_width = 1.0) {
  kreal::ManifoldSpec s;
  s.dimension = n;
  s.label = "test";
  s.potential = potential;
  s.domain_box = std::vector<kreal::Interval>(static_cast<std::size_t>(2 * n), {-half_width, half_width});
  return kreal::build_bundle(s).chart;
}

inline kreal::ChartPoint point(std::initializer_list<std::complex<double>> z) { return kreal::ChartPoint(std::vector<std::complex<double>>(z)); }

// Every built-in that is expected to pass all hypothesis gates.
struct Case {
  std::string name;
  int n;
};
inline std::vector<Case> regular_builtins() {
  return {{"cpn", 1},        {"cpn", 2},       {"cpn", 3},         {"quadric", 1},         {"quadric", 2},
          {"quadric", 3},    {"flat-torus", 2}, {"toric-fs", 2},   {"toric-quadratic", 2}, {"cp1xcp2", 3}};
}

}  // namespace fixture
