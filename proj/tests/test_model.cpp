#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "support/fixtures.hpp"

using namespace kreal;

namespace {

cplx eval(const std::string& src, cplx z1 = 0.0, cplx z2 = 0.0) {
  const auto space = JetSpace::get(2, 0);
  return Expression::parse(src)
      .evaluate({{"z1", CJet::variable(space, 0, z1)}, {"z2", CJet::variable(space, 1, z2)}})
      .value();
}

std::pair<int, int> parse_error_position(const std::string& src) {
  try {
    Expression::parse(src);
  } catch (const ParseError& e) {
    return {e.line(), e.column()};
  }
  return {0, 0};
}

std::string temp_file(const std::string& name, const std::string& body) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << body;
  return p.string();
}

SamplingConfig small_config() {
  SamplingConfig c;
  c.ambient_samples = 12;
  c.locus_samples = 12;
  return c;
}

}  // namespace

TEST(Expression, Arithmetic) {
  EXPECT_EQ(eval("1 + 2*3"), cplx(7.0));
  EXPECT_NEAR(std::abs(eval("2^3^2") - 512.0), 0.0, 1e-12);
  EXPECT_EQ(eval("-2^2"), cplx(-4.0));
  EXPECT_EQ(eval("(1 + 2)*3"), cplx(9.0));
  EXPECT_EQ(eval("8/2/2"), cplx(2.0));
  EXPECT_EQ(eval("1 - 2 - 3"), cplx(-4.0));
  EXPECT_EQ(eval("2*i"), cplx(0.0, 2.0));
  EXPECT_EQ(eval("1.5e1"), cplx(15.0));
  EXPECT_NEAR(std::abs(eval("pi") - std::numbers::pi), 0.0, 1e-15);
}

TEST(Expression, Primitives) {
  const cplx z{0.3, -0.4}, w{1.2, 0.5};
  EXPECT_NEAR(std::abs(eval("abs2(z1)", z) - std::norm(z)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(eval("conj(z1)", z) - std::conj(z)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(eval("re(z1)", z) - z.real()), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(eval("im(z1)", z) - z.imag()), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(eval("log(z2)", z, w) - std::log(w)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(eval("exp(z1)", z) - std::exp(z)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(eval("sqrt(z2)", z, w) - std::sqrt(w)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(eval("sin(z1) + cos(z1)", z) - (std::sin(z) + std::cos(z))), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(eval("pow(z2, 3)", z, w) - w * w * w), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(eval("z1*z2 + 1/z2", z, w) - (z * w + 1.0 / w)), 0.0, 1e-15);
}

TEST(Expression, Variables) {
  const auto e = Expression::parse("log(1 + abs2(z1) + x2) * pi + i");
  EXPECT_EQ(e.variables(), (std::set<std::string>{"x2", "z1"}));
}

TEST(Expression, Errors) {
  EXPECT_THROW(Expression::parse("1 +"), ParseError);
  EXPECT_THROW(Expression::parse("(1 + 2"), ParseError);
  EXPECT_THROW(Expression::parse("1 2"), ParseError);
  EXPECT_THROW(Expression::parse("foo(z1)"), ParseError);
  EXPECT_THROW(Expression::parse("abs(z1)"), ParseError);
  EXPECT_THROW(Expression::parse("pow(z1)"), ParseError);
  EXPECT_THROW(Expression::parse("log(z1, z2)"), ParseError);
  EXPECT_THROW(Expression::parse("1.2.3"), ParseError);
  EXPECT_THROW(Expression::parse("z1 $ 2"), ParseError);
  EXPECT_EQ(parse_error_position("log(1 +\n  foo(z1))"), std::make_pair(2, 3));
  EXPECT_EQ(parse_error_position("1 + * 2"), std::make_pair(1, 5));
  EXPECT_EQ(parse_error_position("abs(z1)"), std::make_pair(1, 1));
  try {
    Expression::parse("1 + frob(z1)");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("unknown primitive 'frob'"), std::string::npos);
  }
}

TEST(Spec, JsonRoundTrip) {
  for (const auto& info : builtin_catalog()) {
    const ManifoldSpec s = builtin_spec(info.name);
    const std::string text = to_json(s).dump(2);
    EXPECT_EQ(to_json(parse_spec(text)).dump(2), text) << info.name;
  }
}

TEST(Spec, ExportedSpecReproducesReport) {
  for (const char* name : {"cpn", "cp1xcp2", "flat-torus"}) {
    const ManifoldSpec s = builtin_spec(name);
    const std::string path = temp_file(std::string("kreal_rt_") + name + ".json", to_json(s).dump(2));
    const auto a = report_json(verify(build_bundle(s), small_config()));
    const auto b = report_json(verify(load_spec(path), small_config()));
    EXPECT_EQ(a, b) << name;
    std::filesystem::remove(path);
  }
}

TEST(Spec, Validation) {
  auto j = to_json(builtin_spec("cpn", 1));
  j["schema_version"] = 2;
  EXPECT_THROW(parse_spec(j.dump()), SpecError);

  j = to_json(builtin_spec("cpn", 1));
  j.erase("schema_version");
  EXPECT_THROW(parse_spec(j.dump()), SpecError);

  j = to_json(builtin_spec("cpn", 2));
  j["domain"]["box"].erase(0);
  EXPECT_THROW(parse_spec(j.dump()), SpecError);

  j = to_json(builtin_spec("cpn", 2));
  j["map"]["components"].erase(0);
  EXPECT_THROW(parse_spec(j.dump()), SpecError);

  j = to_json(builtin_spec("cpn", 2));
  j["c1_sign"] = "sideways";
  EXPECT_THROW(parse_spec(j.dump()), SpecError);

  try {
    parse_spec("{\n  \"schema_version\": 1,\n  \"dimension\": }");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  EXPECT_THROW(read_spec_file("/nonexistent/kreal.json"), std::ios_base::failure);
}

TEST(Spec, CompilationErrors) {
  ManifoldSpec s = builtin_spec("cpn", 1);
  s.potential = "log(1 + abs2(w1))";
  EXPECT_THROW(build_bundle(s), SpecError);
  s = builtin_spec("cpn", 1);
  s.potential = "log(1 + abs2(z1)";
  EXPECT_THROW(build_bundle(s), ParseError);
  s = builtin_spec("cpn", 1);
  s.locus->components = {"z1"};
  EXPECT_THROW(build_bundle(s), SpecError);
  s = builtin_spec("cpn", 1);
  s.potential = "x1";
  EXPECT_THROW(build_bundle(s), SpecError);
}

TEST(Spec, MissingLocusFailsHypotheses) {
  ManifoldSpec s = builtin_spec("cpn", 2);
  s.locus.reset();
  const auto r = verify(build_bundle(s), small_config());
  EXPECT_EQ(r.exit_code, kExitHypothesesFailed);
  EXPECT_FALSE(r.failed_hypotheses.empty());
  s = builtin_spec("cpn", 2);
  s.map.reset();
  EXPECT_EQ(verify(build_bundle(s), small_config()).exit_code, kExitHypothesesFailed);
}

TEST(Builtins, ToricFubiniStudyMatchesAffineChart) {
  const auto toric = builtin_bundle("toric-fs", 2);
  const auto fs = builtin_bundle("cpn", 2);
  for (const auto& p : fixture::ambient_points(toric, 20)) {
    const auto a = metric_at(toric.chart, p).g, b = metric_at(fs.chart, p).g;
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Builtins, ToricQuadraticIsDiagonal) {
  const auto b = builtin_bundle("toric-quadratic", 2);
  for (const auto& p : fixture::ambient_points(b, 20)) {
    const auto g = metric_at(b.chart, p).g;
    EXPECT_NEAR(std::abs(g(0, 0) - 1.0 / std::norm(p.holo()[0])), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(g(1, 1) - 1.0 / std::norm(p.holo()[1])), 0.0, 1e-12);
    EXPECT_LT(std::abs(g(0, 1)), 1e-14);
  }
}

TEST(Builtins, ToricPotentialIsTorusInvariant) {
  for (const char* name : {"toric-fs", "toric-quadratic"}) {
    const auto b = builtin_bundle(name, 2);
    for (const auto& p : fixture::ambient_points(b, 20)) {
      const ChartPoint q({p.holo()[0] * std::polar(1.0, 0.01), p.holo()[1] * std::polar(1.0, -0.02)});
      EXPECT_LT(std::abs(b.chart.potential_value(q) - b.chart.potential_value(p)), 1e-14) << name;
    }
  }
}

TEST(Builtins, ToricOrthant) {
  const auto b = build_bundle(builtin_toric_fs(2, {1, -1}));
  EXPECT_LT(b.domain_upper[2], 0.0);
  for (const auto& t : fixture::locus_params(b, 5)) {
    const auto p = locus_point(*b.locus, t);
    EXPECT_GT(p.holo()[0].real(), 0.0);
    EXPECT_LT(p.holo()[1].real(), 0.0);
  }
  EXPECT_EQ(verify(b, small_config()).exit_code, kExitEinstein);
  EXPECT_THROW(builtin_toric_fs(2, {1, 0}), std::invalid_argument);
  EXPECT_THROW(builtin_toric_fs(2, {1}), std::invalid_argument);
}

TEST(Builtins, Catalog) {
  EXPECT_EQ(builtin_catalog().size(), 9u);
  EXPECT_THROW(builtin_spec("nope"), std::invalid_argument);
  EXPECT_THROW(builtin_spec("cpn", 5), std::invalid_argument);
  EXPECT_EQ(builtin_spec("cpn").dimension, 2);
  EXPECT_EQ(builtin_spec("cp1xcp2", 2).dimension, 3);
}

TEST(Sampling, HaltonDeterministicAndInsideMargins) {
  const std::vector<double> lo{-1.0, 0.0, 2.0}, hi{1.0, 4.0, 3.0};
  HaltonSampler a(lo, hi, 42), b(lo, hi, 42), c(lo, hi, 43);
  bool differs = false;
  for (std::uint64_t k = 0; k < 200; ++k) {
    const auto x = a.point(k);
    EXPECT_EQ(x, b.point(k));
    differs = differs || x != c.point(k);
    for (std::size_t d = 0; d < 3; ++d) {
      const double w = hi[d] - lo[d];
      EXPECT_GE(x[d], lo[d] + 0.05 * w);
      EXPECT_LE(x[d], hi[d] - 0.05 * w);
    }
  }
  EXPECT_TRUE(differs);
  EXPECT_DOUBLE_EQ(radical_inverse(1, 2), 0.5);
  EXPECT_DOUBLE_EQ(radical_inverse(3, 2), 0.75);
  EXPECT_DOUBLE_EQ(radical_inverse(5, 3), 7.0 / 9.0);
  EXPECT_THROW(HaltonSampler({0.0}, {1.0, 2.0}, 1), std::invalid_argument);
}

TEST(Verify, ExitCodes) {
  const auto cfg = small_config();
  std::ostringstream sink;
  EXPECT_EQ(run_verify(builtin_bundle("cpn", 2), cfg, ReportFormat::text, sink), kExitEinstein);
  EXPECT_EQ(run_verify(builtin_bundle("quadric", 2), cfg, ReportFormat::text, sink), kExitEinstein);
  EXPECT_EQ(run_verify(builtin_bundle("cp1xcp2"), cfg, ReportFormat::text, sink), kExitNotEinstein);
  EXPECT_EQ(run_verify(builtin_bundle("flat-perturbed", 2), cfg, ReportFormat::text, sink), kExitHypothesesFailed);
  EXPECT_EQ(run_verify(builtin_bundle("cpn-nonisometric", 1), cfg, ReportFormat::text, sink), kExitHypothesesFailed);
  EXPECT_EQ(run_verify(builtin_bundle("degenerate-chart"), cfg, ReportFormat::text, sink), kExitDegenerate);
}

TEST(Verify, FailedGatesAreNamed) {
  const auto r = verify(builtin_bundle("cpn-nonisometric", 1), small_config());
  ASSERT_NE(r.find("isometry"), nullptr);
  EXPECT_FALSE(r.find("isometry")->passed);
  EXPECT_FALSE(r.find("potential_invariance")->passed);
  EXPECT_TRUE(r.find("antiholomorphy")->passed);
  const auto q = verify(builtin_bundle("flat-perturbed", 2), small_config());
  EXPECT_FALSE(q.find("ambient_einstein")->passed);
}

TEST(Verify, ByteIdenticalReports) {
  for (const char* name : {"cpn", "cp1xcp2", "degenerate-chart"}) {
    const auto b = builtin_bundle(name);
    std::ostringstream a, c;
    run_verify(b, small_config(), ReportFormat::json, a);
    run_verify(builtin_bundle(name), small_config(), ReportFormat::json, c);
    EXPECT_EQ(a.str(), c.str()) << name;
    std::ostringstream t1, t2;
    run_verify(b, small_config(), ReportFormat::text, t1);
    run_verify(b, small_config(), ReportFormat::text, t2);
    EXPECT_EQ(t1.str(), t2.str()) << name;
  }
  SamplingConfig other = small_config();
  other.seed = 7;
  EXPECT_NE(report_json(verify(builtin_bundle("cpn"), other)), report_json(verify(builtin_bundle("cpn"), small_config())));
}

TEST(Verify, ZeroFirstChernClassRecordsAssumption) {
  const auto r = verify(builtin_bundle("flat-torus", 2), small_config());
  ASSERT_EQ(r.assumed_hypotheses.size(), 1u);
  EXPECT_EQ(r.assumed_hypotheses[0], kFlatClassHypothesisText);
  const auto j = nlohmann::json::parse(report_json(r));
  EXPECT_EQ(j["assumed_hypotheses"][0], kFlatClassHypothesisText);
  EXPECT_EQ(j["c1_sign"], "zero");
  EXPECT_EQ(j["exit_code"], 0);
  EXPECT_TRUE(verify(builtin_bundle("cpn", 2), small_config()).assumed_hypotheses.empty());
}

TEST(Verify, ReportContents) {
  const auto r = verify(builtin_bundle("cpn", 2), small_config());
  const auto j = nlohmann::json::parse(report_json(r));
  EXPECT_EQ(j["format_version"], kReportFormatVersion);
  EXPECT_EQ(j["config"]["seed"], 42);
  EXPECT_EQ(j["samples"]["locus"]["used"], 12);
  EXPECT_NEAR(j["constants"]["C"].get<double>(), 2.5, 1e-8);
  EXPECT_EQ(j["verdict"], r.verdict);
  for (const auto& c : j["checks"]) EXPECT_NE(find_explanation(c["name"].get<std::string>()), nullptr) << c["name"];
  const std::string text = report_text(r);
  EXPECT_NE(text.find("exit 0"), std::string::npos);
  EXPECT_NE(text.find("C = 2.5"), std::string::npos);
}

TEST(Verify, ToleranceOverrides) {
  SamplingConfig cfg = small_config();
  // product locus: trace spread (2 - 5/3) / (16/9) = 0.1875, Ricci spread 1/3
  cfg.tol_eig = 0.4;
  EXPECT_EQ(verify(builtin_bundle("cp1xcp2"), cfg).exit_code, kExitEinstein);
  cfg.tol_eig = 0.2;
  const auto split = verify(builtin_bundle("cp1xcp2"), cfg);
  EXPECT_EQ(split.exit_code, kExitDegenerate);
  EXPECT_GT(split.cross_check_disagreements, 0);
  cfg.tol_eig = 0.18;
  EXPECT_EQ(verify(builtin_bundle("cp1xcp2"), cfg).exit_code, kExitNotEinstein);
}
