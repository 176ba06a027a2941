// kreal: command-line driver for the verification pipeline.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "kreal/kreal.hpp"

namespace {

kreal::ManifoldBundle resolve_manifold(const std::string& name, int n) {
  if (kreal::find_builtin(name)) return kreal::builtin_bundle(name, n);
  return kreal::load_spec(name);
}

int write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "kreal: cannot write '" << path << "'\n";
    return kreal::kExitUsage;
  }
  out << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kahler potentials, anti-holomorphic maps and the Einstein property of their fixed loci"};
  app.require_subcommand(1);

  std::string manifold, report = "text", out_path;
  int n = 0;
  kreal::SamplingConfig config;
  std::optional<double> tol_eig, tol_sym, tol_const;

  auto* verify = app.add_subcommand("verify", "run all checks and the Einstein criterion on a manifold");
  verify->add_option("--manifold", manifold, "built-in name or path to a JSON spec")->required();
  verify->add_option("--n", n, "complex dimension for built-ins that take one");
  verify->add_option("--samples", config.ambient_samples, "ambient sample count")->check(CLI::PositiveNumber);
  verify->add_option("--locus-samples", config.locus_samples, "locus sample count")->check(CLI::PositiveNumber);
  verify->add_option("--seed", config.seed, "sampling seed");
  verify->add_option("--tol-eig", tol_eig, "relative eigenvalue spread tolerance")->check(CLI::PositiveNumber);
  verify->add_option("--tol-sym", tol_sym, "relative asymmetry tolerance")->check(CLI::PositiveNumber);
  verify->add_option("--tol-const", tol_const, "relative constancy tolerance")->check(CLI::PositiveNumber);
  verify->add_option("--report", report, "report format")->check(CLI::IsMember({"text", "json"}));
  verify->add_option("--out", out_path, "write the report here instead of stdout");

  auto* list = app.add_subcommand("list-builtins", "list built-in manifolds");

  std::string check_name;
  auto* explain = app.add_subcommand("explain", "describe a check and its threshold");
  explain->add_option("check", check_name, "check name (omit to list all)");

  std::string export_out;
  auto* exporter = app.add_subcommand("export", "write the JSON spec of a built-in");
  exporter->add_option("--manifold", manifold, "built-in name")->required();
  exporter->add_option("--n", n, "complex dimension");
  exporter->add_option("--out", export_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kreal::kExitUsage;
  }

  try {
    if (*list) {
      for (const auto& b : kreal::builtin_catalog())
        std::cout << b.name << (b.takes_n ? " [--n N]" : "") << "\n    " << b.description << "\n";
      return 0;
    }
    if (*explain) {
      if (check_name.empty()) {
        for (const auto& e : kreal::check_explanations()) std::cout << e.name << "\n";
        return 0;
      }
      const auto* e = kreal::find_explanation(check_name);
      if (!e) {
        std::cerr << "kreal: unknown check '" << check_name << "' (run 'kreal explain' for the list)\n";
        return kreal::kExitUsage;
      }
      std::cout << e->name << "\n  measures   " << e->formula << "\n  threshold  " << e->threshold << "\n";
      return 0;
    }
    if (*exporter) {
      const auto spec = kreal::builtin_spec(manifold, n);
      return write_output(kreal::to_json(spec).dump(2) + "\n", export_out);
    }
    config.tol_eig = tol_eig;
    config.tol_sym = tol_sym;
    config.tol_const = tol_const;
    const kreal::ManifoldBundle bundle = resolve_manifold(manifold, n);
    const kreal::VerificationReport r = kreal::verify(bundle, config);
    const std::string text = report == "json" ? kreal::report_json(r) : kreal::report_text(r);
    if (const int rc = write_output(text, out_path); rc != 0) return rc;
    return r.exit_code;
  } catch (const kreal::ParseError& e) {
    std::cerr << "kreal: parse error: " << e.what() << "\n";
  } catch (const kreal::SpecError& e) {
    std::cerr << "kreal: invalid spec: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "kreal: " << e.what() << "\n";
  }
  return kreal::kExitUsage;
}
