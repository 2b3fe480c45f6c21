// Command line front end: runs the property suites on a metric spec and writes
// a canonical JSON report. Exit codes: 0 pass, 1 fail, 2 usage or parse error.

#include <CLI11.hpp>

#include <chrono>
#include <iostream>
#include <optional>

#include "ckp/config.hpp"
#include "ckp/suites.hpp"

namespace {

struct Overrides {
  std::string spec, report = "-";
  std::optional<int> n, k, points, jet_order;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  bool serial = false;
};

ckp::RunConfig load(const Overrides& o) {
  ckp::RunConfig cfg = o.spec.empty() ? ckp::parse_spec_text("") : ckp::parse_spec_file(o.spec);
  if (o.n) cfg.n = *o.n;
  if (o.k) cfg.k = *o.k;
  if (o.points) cfg.points = *o.points;
  if (o.jet_order) cfg.jet_order = *o.jet_order;
  if (o.seed) cfg.seed = *o.seed;
  if (o.tol) cfg.tol = *o.tol;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of the invariant prolongation of the conformal Killing form equation"};
  app.require_subcommand(1);
  app.fallthrough();
  Overrides o;
  app.add_option("--spec", o.spec, "metric-spec file (YAML)");
  app.add_option("--n", o.n, "dimension (4..8)");
  app.add_option("--k", o.k, "form degree (1..n-2)");
  app.add_option("--points", o.points, "number of sample points");
  app.add_option("--seed", o.seed, "random seed");
  app.add_option("--tol", o.tol, "tolerance of the relative headline checks");
  app.add_option("--jet-order", o.jet_order, "metric jet order (>= 3; >= 4 for prolong and invariance)");
  app.add_option("--report", o.report, "report path, '-' for stdout");
  app.add_flag("--serial", o.serial, "run the point loops serially");

  const char* names[] = {"identities", "prolong", "invariance", "obstruction", "holonomy", "all"};
  const char* help[] = {"curvature, Kostant and first BGG operator identities",
                        "normalization of the deformed connection and solution lifts",
                        "conformal invariance of the deformation",
                        "obstruction tensor (k >= 2)",
                        "solution dimension from holonomy (conformally flat metrics)",
                        "every suite"};
  for (int i = 0; i < 6; ++i) app.add_subcommand(names[i], help[i]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();

  ckp::Report report;
  try {
    const ckp::RunConfig cfg = load(o);
    const ckp::Exec exec = o.serial ? ckp::Exec::Serial : ckp::Exec::Parallel;
    const auto t0 = std::chrono::steady_clock::now();
    if (cmd == "identities") report = ckp::run_identities(cfg, exec);
    else if (cmd == "prolong") report = ckp::run_prolong(cfg, exec);
    else if (cmd == "invariance") report = ckp::run_invariance(cfg, exec);
    else if (cmd == "obstruction") report = ckp::run_obstruction(cfg, exec);
    else if (cmd == "holonomy") report = ckp::run_holonomy(cfg);
    else report = ckp::run_all(cfg, exec);
    report.set_timing(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  } catch (const ckp::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const ckp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    ckp::emit_report(report, o.report);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  int failed = 0, known = 0;
  for (const auto& c : report.checks()) {
    if (c.pass) continue;
    if (c.known_deviation) ++known;
    else ++failed;
  }
  std::cerr << (report.pass() ? "PASS" : "FAIL") << ": " << report.checks().size() << " checks, " << failed
            << " failed, " << known << " known deviations\n";
  return report.pass() ? 0 : 1;
}
