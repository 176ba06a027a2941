#pragma once

/// \file
/// The bundle of data a verification run consumes.

#include <optional>
#include <string>
#include <vector>

#include "kreal/antiholo/antiholomorphic.hpp"
#include "kreal/criterion/einstein_criterion.hpp"
#include "kreal/kahler/metrics.hpp"

namespace kreal {

enum class C1Sign { negative, zero, positive };

inline const char* to_string(C1Sign s) {
  switch (s) {
    case C1Sign::negative:
      return "negative";
    case C1Sign::zero:
      return "zero";
    case C1Sign::positive:
      return "positive";
  }
  return "?";
}

/// Recorded as assumed whenever c1 = 0 is declared; not checkable chart-locally.
inline constexpr const char* kFlatClassHypothesisText = "cohomology class of -f*omega equals that of omega";

struct ManifoldBundle {
  std::string label;
  PotentialChart chart;
  std::optional<AntiholoMap> map;
  std::optional<FixedLocusParam> locus;
  C1Sign c1_sign = C1Sign::positive;
  /// Hypotheses taken on trust because they cannot be checked chart-locally.
  std::vector<std::string> assumed_hypotheses;
  /// Ambient sampling box in real coordinates (2n intervals).
  std::vector<double> domain_lower, domain_upper;
  std::optional<Tolerances> tolerances;
};

}  // namespace kreal
