// Build a manifold from an inline spec, then evaluate the trace operator by hand.

#include <cstdio>

#include "kreal/kreal.hpp"

int main() {
  kreal::ManifoldSpec s;
  s.label = "cp2-scaled";
  s.dimension = 2;
  s.potential = "2*log(1 + abs2(z1) + abs2(z2))";
  s.domain_box = {{-1, 1}, {-1, 1}, {-1, 1}, {-1, 1}};
  s.map = kreal::MapSpec{{"conj(z1)", "conj(z2)"}, true};
  s.locus = kreal::LocusSpec{{"t1", "t2"}, {{-1, 1}, {-1, 1}}};
  const kreal::ManifoldBundle b = kreal::build_bundle(s);

  const std::vector<double> t{0.2, -0.4};
  const auto ctx = kreal::locus_context(b.chart, *b.map, *b.locus, t);
  const auto sv = kreal::spectral_test(kreal::trace_operator_at(ctx).M);
  std::printf("C at t = (0.2, -0.4): %.12f (einstein here: %s)\n", sv.C_est, sv.einstein ? "yes" : "no");

  const kreal::VerificationReport r = kreal::verify(b);
  std::printf("lambda %.6f  kappa %.6f  C %.6f  -> %s (exit %d)\n", *r.lambda, *r.kappa, *r.C, r.verdict.c_str(),
              r.exit_code);
  return r.exit_code;
}
