// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fail.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "support/fixtures.hpp"

using namespace kreal;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

void fail(Outcome& o, const std::string& why) {
  if (o.pass) o.detail = why;
  o.pass = false;
}

std::string num(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3g", v);
  return b;
}

const std::vector<fixture::Case>& regular() {
  static const auto cases = fixture::regular_builtins();
  return cases;
}

Outcome fs_baseline() {
  Outcome o;
  for (int n = 1; n <= 3; ++n) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto b = builtin_bundle("cpn", n);
    const auto pts = fixture::ambient_points(b, 64);
    const auto r = einstein_residual(b.chart, pts);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.used < 50) fail(o, "n=" + std::to_string(n) + ": only " + std::to_string(r.used) + " samples");
    if (std::abs(r.lambda - (n + 1)) > 1e-7) fail(o, "n=" + std::to_string(n) + ": lambda " + num(r.lambda));
    if (!(r.max_residual < 1e-7)) fail(o, "n=" + std::to_string(n) + ": residual " + num(r.max_residual));
    if (secs >= 10.0) fail(o, "n=" + std::to_string(n) + ": " + num(secs) + " s");
  }
  if (o.pass) o.detail = "lambda = n + 1 for n = 1, 2, 3";
  return o;
}

Outcome conjugation_isometry() {
  Outcome o;
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n) {
    const auto b = builtin_bundle("cpn", n);
    for (const auto& p : fixture::ambient_points(b, 64)) {
      const double a = isometry_residual(*b.map, b.chart, p), c = anti_isometry_residual(*b.map, b.chart, p);
      worst = std::max({worst, a, c});
      if (!(a < 1e-9) || !(c < 1e-9)) fail(o, "n=" + std::to_string(n) + ": residual " + num(std::max(a, c)));
    }
  }
  if (o.pass) o.detail = "max residual " + num(worst);
  return o;
}

FixedLocusParam circle(double r) {
  FixedLocusParam l;
  l.dimension = 1;
  l.param = [r](std::span<const CJet> t) { return std::vector<CJet>{r * (cos(t[0]) + cplx{0.0, 1.0} * sin(t[0]))}; };
  l.lower = {0.0};
  l.upper = {6.28};
  l.label = "circle";
  return l;
}

Outcome totally_geodesic() {
  Outcome o;
  for (const char* name : {"cpn", "quadric"}) {
    const double tol = std::string(name) == "cpn" ? 1e-7 : 1e-6;
    for (int n = 1; n <= 3; ++n) {
      const auto b = builtin_bundle(name, n);
      for (const auto& t : fixture::locus_params(b, 32)) {
        const double h = second_fundamental_form(b.chart, *b.locus, t).norm();
        if (!(h < tol)) fail(o, std::string(name) + std::to_string(n) + ": |h| " + num(h));
      }
    }
  }
  const auto chart = fixture::chart_from("abs2(z1)/2", 1, 2.5);
  for (double r : {0.5, 1.0, 2.0})
    for (double t : {0.3, 1.7, 4.0}) {
      const double h = second_fundamental_form(chart, circle(r), std::vector<double>{t}).norm();
      if (!(std::abs(h * r - 1.0) < 0.05)) fail(o, "circle r=" + num(r) + ": |h| " + num(h));
    }
  if (o.pass) o.detail = "real slices totally geodesic, circle |h| = 1/r";
  return o;
}

Outcome projection_identities() {
  Outcome o;
  std::mt19937_64 rng(1);
  double worst = 0.0;
  for (const auto& c : regular()) {
    const auto b = builtin_bundle(c.name, c.n);
    const auto ts = fixture::locus_params(b, 10);
    for (int k = 0; k < 1000; ++k) {
      const auto p = locus_point(*b.locus, ts[static_cast<std::size_t>(k) % ts.size()]);
      const Eigen::MatrixXd Df = differential(*b.map, p);
      const RealTangent v = fixture::random_vector(rng, 2 * c.n);
      const auto [top, perp] = project_tn(Df, v);
      const double sum = (top + perp - v).cwiseAbs().maxCoeff();
      const double swap = (apply_J(top) - project_tn(Df, apply_J(v)).second).cwiseAbs().maxCoeff();
      worst = std::max(worst, swap);
      if (sum != 0.0) fail(o, c.name + ": sum residual " + num(sum));
      if (!(swap < 1e-12)) fail(o, c.name + ": J-swap " + num(swap));
    }
  }
  if (o.pass) o.detail = "max J-swap residual " + num(worst);
  return o;
}

Outcome trace_equivalence() {
  Outcome o;
  double worst = 0.0;
  for (const auto& c : regular()) {
    const auto b = builtin_bundle(c.name, c.n);
    for (const auto& t : fixture::locus_params(b, 32)) {
      const auto ctx = locus_context(b.chart, *b.map, *b.locus, t);
      const double d = (trace_operator_at(ctx).M - trace_operator_via_mixed_curvature(ctx, ctx.lp.frame)).cwiseAbs().maxCoeff();
      worst = std::max(worst, d);
      if (!(d < 1e-8)) fail(o, c.name + ": " + num(d));
    }
  }
  if (o.pass) o.detail = "max entrywise difference " + num(worst);
  return o;
}

Outcome biconditional() {
  Outcome o;
  for (int n = 2; n <= 3; ++n) {
    const auto r = verify(builtin_bundle("cpn", n));
    const std::string tag = "cp" + std::to_string(n);
    if (!r.einstein_by_spectrum || !r.einstein_by_ricci || !*r.einstein_by_spectrum || !*r.einstein_by_ricci)
      fail(o, tag + ": criteria not both true");
    if (!r.lambda || !r.kappa || !r.C || std::abs(*r.lambda - *r.kappa - *r.C) > 1e-6)
      fail(o, tag + ": lambda != kappa + C");
  }
  const auto f = verify(builtin_bundle("flat-torus", 2));
  if (!f.lambda || !f.kappa || !f.C || std::abs(*f.lambda) > 1e-10 || std::abs(*f.kappa) > 1e-10 || std::abs(*f.C) > 1e-10)
    fail(o, "flat torus constants not zero");
  if (f.exit_code != kExitEinstein) fail(o, "flat torus exit " + std::to_string(f.exit_code));
  if (o.pass) o.detail = "CP^2, CP^3 Einstein both ways; flat torus C = kappa = lambda = 0";
  return o;
}

Outcome pullback_lambda() {
  Outcome o;
  for (const auto& info : builtin_catalog()) {
    if (info.name == "degenerate-chart") continue;
    const auto b = builtin_bundle(info.name);
    const auto pts = fixture::ambient_points(b, 32);
    const auto pulled = pullback_potential(*b.map, b.chart);
    const double l0 = einstein_residual(b.chart, pts).lambda;
    try {
      const double l1 = einstein_residual(pulled, pts).lambda;
      if (!(std::abs(l1 - l0) < 1e-7)) fail(o, info.name + ": " + num(l0) + " vs " + num(l1));
    } catch (const std::exception& e) {
      fail(o, info.name + ": " + e.what());
    }
  }
  if (o.pass) o.detail = "lambda preserved on every non-degenerate built-in";
  return o;
}

Outcome curvature_symmetries() {
  Outcome o;
  std::mt19937_64 rng(2);
  const auto b = builtin_bundle("cpn", 2);
  const auto pts = fixture::ambient_points(b, 50);
  double comm = 0.0, bianchi = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const KahlerGeometry geo = geometry_at(b.chart, pts[static_cast<std::size_t>(k) % pts.size()]);
    RealTangent v[4];
    for (auto& x : v) x = fixture::random_vector(rng, 4);
    const RealTangent r = geo.endomorphism(v[0], v[1], v[2]);
    comm = std::max(comm, (geo.endomorphism(v[0], v[1], apply_J(v[2])) - apply_J(r)).norm() / std::max(1.0, r.norm()));
    bianchi = std::max(bianchi, std::abs(geo.rm(v[0], v[1], v[2], v[3]) + geo.rm(v[1], v[2], v[0], v[3]) +
                                         geo.rm(v[2], v[0], v[1], v[3])));
  }
  if (!(comm < 1e-9)) fail(o, "commutation " + num(comm));
  if (!(bianchi < 1e-9)) fail(o, "first Bianchi " + num(bianchi));
  if (o.pass) o.detail = "commutation " + num(comm) + ", Bianchi " + num(bianchi);
  return o;
}

Outcome negative_controls() {
  Outcome o;
  const int a = verify(builtin_bundle("flat-perturbed", 2)).exit_code;
  const int b = verify(builtin_bundle("cpn-nonisometric", 1)).exit_code;
  if (a != kExitHypothesesFailed) fail(o, "perturbed chart exit " + std::to_string(a));
  if (b != kExitHypothesesFailed) fail(o, "non-isometric map exit " + std::to_string(b));
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2, 2);
  D(0, 0) = -3.0, D(1, 1) = -3.5;
  const Tolerances tol;
  std::vector<SpectralVerdict> pts(8, spectral_test(-3.0 * Eigen::MatrixXd::Identity(2, 2), tol));
  pts[3] = spectral_test(D, tol);
  if (einstein_by_spectrum(pts, tol)) fail(o, "spread locus reported Einstein");
  if (o.pass) o.detail = "exits 3, 3 and einstein = false";
  return o;
}

Outcome determinism() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& info : builtin_catalog()) {
    std::ostringstream x, y;
    run_verify(builtin_bundle(info.name), SamplingConfig{}, ReportFormat::json, x);
    run_verify(builtin_bundle(info.name), SamplingConfig{}, ReportFormat::json, y);
    if (x.str() != y.str()) fail(o, info.name + ": reports differ");
  }
  for (const auto& c : regular()) {
    std::ostringstream x;
    run_verify(builtin_bundle(c.name, c.n), SamplingConfig{}, ReportFormat::json, x);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!(secs < 120.0)) fail(o, "suite took " + num(secs) + " s");
  if (o.pass) o.detail = "byte-identical reports, suite " + num(secs) + " s";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"fubini-study baseline", fs_baseline},
      {"conjugation isometry", conjugation_isometry},
      {"totally geodesic loci", totally_geodesic},
      {"projection identities", projection_identities},
      {"trace operator equivalence", trace_equivalence},
      {"einstein biconditional", biconditional},
      {"pullback preserves lambda", pullback_lambda},
      {"curvature symmetries", curvature_symmetries},
      {"negative controls", negative_controls},
      {"determinism and runtime", determinism},
  };
  int failed = 0, k = 0;
  for (const auto& [name, run] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%-4s %2d  %-28s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", ++k, name, secs, o.detail.c_str());
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
