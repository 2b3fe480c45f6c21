#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "ckp/bgg.hpp"
#include "ckp/suites.hpp"

using namespace ckp;

namespace {

template <class E>
E error_of(const std::string& text) {
  try {
    parse_spec_text(text);
  } catch (const E& e) {
    return e;
  }
  FAIL("expected an error for: " << text);
  return E("", 0, 0);
}

struct Run {
  int code = -1;
  std::string out;
};

Run run_tool(const std::string& args) {
  const std::string cmd = std::string(CKPROLONG_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("ckp_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_CASE("spec parsing: defaults and overrides") {
  const RunConfig d = parse_spec_text("");
  CHECK(d.n == 4);
  CHECK(d.k == 2);
  CHECK(d.metric.family == "flat");
  const RunConfig c = parse_spec_text(
      "n: 5\nk: 3\npoints: 2\nseed: 9\ntol: 1e-6\njet_order: 5\nrescale: 'x1*x2'\n"
      "metric:\n  family: perturbed\n  eps: 0.1\n  seed: 3\n");
  CHECK(c.n == 5);
  CHECK(c.k == 3);
  CHECK(c.points == 2);
  CHECK(c.seed == 9);
  CHECK(c.tol == 1e-6);
  CHECK(c.jet_order == 5);
  CHECK(c.metric.family == "perturbed");
  CHECK(c.metric.eps == 0.1);
  CHECK(c.metric.seed == 3);
  CHECK(c.rescale->eval(std::vector<double>{2.0, 3.0, 0, 0, 0}) == 6.0);
  CHECK_FALSE(c.chart().conformally_flat());
}

TEST_CASE("spec parsing: metric families") {
  const RunConfig top = parse_spec_text("family: conformal\nf: '0.1*x1'\n");
  CHECK(top.chart().family() == MetricChart::Family::Conformal);
  CHECK(top.chart().conformally_flat());
  const RunConfig sphere = parse_spec_text("n: 6\nk: 1\nfamily: sphere\nradius: 2\n");
  CHECK(sphere.chart().family() == MetricChart::Family::RoundSphere);
  const RunConfig nested =
      parse_spec_text("metric:\n  family: conformal\n  f: 'x2'\n  base:\n    family: sphere\n    radius: 3\n");
  CHECK(nested.metric.base->radius == 3.0);
  const RunConfig an = parse_spec_text("metric:\n  family: analytic\n  g:\n    '11': '1 + x2*x2'\n    '2,3': '0.1*x1'\n");
  const Tensor g = an.chart().metric_at({0.5, 2.0, 0.0, 0.0});
  CHECK(g(0, 0) == 5.0);
  CHECK(g(1, 2) == doctest::Approx(0.05));
  CHECK(g(2, 1) == doctest::Approx(0.05));
  CHECK(g(3, 3) == 1.0);
  CHECK(g(0, 3) == 0.0);
}

TEST_CASE("spec parsing: errors") {
  CHECK_THROWS_AS(parse_spec_text("n: 3\n"), UnsupportedDimension);
  CHECK_THROWS_AS(parse_spec_text("n: 9\n"), UnsupportedDimension);
  CHECK_THROWS_AS(parse_spec_text("n: 4\nk: 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_spec_text("points: 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_spec_text("tol: -1\n"), ConfigError);
  CHECK_THROWS_AS(parse_spec_text("jet_order: 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_spec_text("family: conformal\n"), ConfigError);
  CHECK_THROWS_AS(parse_spec_text("n: 4\nrescale: 'x5'\n"), ConfigError);
  CHECK_THROWS_AS(parse_spec_text("- 1\n- 2\n"), ConfigError);
  const auto unknown = error_of<ConfigError>("n: 4\ncolour: red\n");
  CHECK(unknown.line() == 2);
  CHECK(unknown.column() == 1);
  const auto family = error_of<ConfigError>("n: 4\nmetric:\n  family: torus\n");
  CHECK(family.line() == 3);
  const auto expr = error_of<ParseError>("n: 4\nrescale: 'x1 +'\n");
  CHECK(expr.line() == 2);
  const auto yaml = error_of<ParseError>("n: [4\n");
  CHECK(yaml.line() >= 1);
  CHECK_THROWS_AS(parse_spec_file("/nonexistent/spec.yaml"), ConfigError);
}

TEST_CASE("empty report is canonical") {
  const Report r;
  CHECK(r.pass());
  CHECK(to_canonical_json(r) == R"({"checks": [], "pass": true})");
}

TEST_CASE("report rendering") {
  Report r;
  r.add(make_check("b.second", 4, 2, "flat(4,0)", 1.5e-12, 1e-9));
  r.add(make_check("a.first", 4, 2, "flat(4,0)", 0.0, 1e-9));
  CheckRecord dev = make_check("c.third", 4, 2, "flat(4,0)", 10.0, 1e-9);
  dev.known_deviation = true;
  dev.note = "tabulated 2, observed 12";
  r.add(dev);
  r.add(CoefficientTable{"psi", 4, 2, {{"lambda1", Rational(3, 2)}, {"rho2", Rational(0)}}});
  CHECK(r.pass());
  const std::string s = to_canonical_json(r);
  CHECK(s.find(R"j({"k": 2, "max_residual": 1.5e-12, "metric": "flat(4,0)", "n": 4, "name": "b.second", "pass": true, "tolerance": 1e-09})j") != std::string::npos);
  CHECK(s.find(R"("max_residual": 0.0)") != std::string::npos);
  CHECK(s.find(R"("known_deviation": true)") != std::string::npos);
  CHECK(s.find(R"("entries": {"lambda1": "3/2", "rho2": "0/1"})") != std::string::npos);
  // checks keep insertion order, keys are sorted
  CHECK(s.find("b.second") < s.find("a.first"));
  CHECK(s.rfind(R"(, "pass": true})") == s.size() - std::string(R"(, "pass": true})").size());
  // re-emitting parsed output is the identity
  CHECK(canonical_dump(nlohmann::json::parse(s)) == s);
  r.add(make_check("d.fails", 4, 2, "flat(4,0)", 1e-3, 1e-9));
  CHECK_FALSE(r.pass());
  CHECK(to_canonical_json(r).find(R"("pass": false})") != std::string::npos);
  CHECK_FALSE(make_check("nan", 4, 2, "m", std::nan(""), 1.0).pass);
  CHECK(canonical_dump(nlohmann::json::parse("[1.0, 2, \"x\", null, {\"b\": 1, \"a\": [true]}]")) ==
        R"([1.0, 2, "x", null, {"a": [true], "b": 1}])");
}

TEST_CASE("point loops: serial and parallel agree") {
  const auto pts = sample_points(5, 16, 3);
  const PointKernel kernel = [](const std::vector<double>& x, int i) {
    const auto pack = curvature_pack(MetricChart::perturbed(5, 0.3, 7), x, 3);
    const auto ops = kostant_ops(point_data(pack, 2, 0));
    PointResiduals r = {{"box", ops.box(1).norm()}, {"index", static_cast<double>(i)}};
    if (i == 7) throw std::runtime_error("boom");
    return r;
  };
  const PointRun s = run_points(pts, kernel, Exec::Serial);
  const PointRun p = run_points(pts, kernel, Exec::Parallel);
  REQUIRE(s.residuals.size() == pts.size());
  auto same = [](const PointResiduals& a, const PointResiduals& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
      if (a[i].first != b[i].first || !(a[i].second == b[i].second || (std::isnan(a[i].second) && std::isnan(b[i].second))))
        return false;
    return true;
  };
  for (size_t i = 0; i < pts.size(); ++i) CHECK(same(s.residuals[i], p.residuals[i]));
  CHECK(s.errors == p.errors);
  CHECK(s.residuals[3][1].second == 3.0);
  CHECK(std::isnan(s.residuals[7][0].second));
  const auto folded = fold_max(s);
  bool saw_error = false;
  for (const auto& [name, v] : folded) saw_error |= name == "error" && std::isnan(v);
  CHECK(saw_error);
}

TEST_CASE("flat model Killing forms") {
  const int n = 4, k = 2;
  const int N = ChainSpace::get(n, k, 0).dim();
  Eigen::VectorXd s0 = Eigen::VectorXd::Zero(N);
  s0(3) = 1;
  s0(N - 1) = -2;
  const std::vector<double> x = {0.1, -0.1, 0.05, 0.0};
  const JetMatrix sigma = flat_killing_form(n, k, s0, x, 3);
  const auto pd2 = point_data(curvature_pack(MetricChart::flat(n), x, 4), k, 2);
  CHECK(sigma.value().norm() > 1e-3);
  CHECK(theta0(pd2, sigma).theta.norm() < 1e-13);
}

TEST_CASE("suites on the flat model") {
  RunConfig cfg = parse_spec_text("n: 4\nk: 2\npoints: 2\n");
  const Report all = run_all(cfg, Exec::Serial);
  CHECK(all.pass());
  int known = 0;
  for (const auto& c : all.checks()) known += c.known_deviation;
  CHECK(known >= 1);
  CHECK(all.solutions().size() == 1);
  CHECK(all.solutions()[0].dimension == 20);
  cfg.k = 1;
  CHECK_THROWS_AS(run_obstruction(cfg), ConfigError);
  cfg.metric.family = "perturbed";
  CHECK_THROWS_AS(run_holonomy(cfg), ConfigError);
  // seeded runs are reproducible
  cfg.k = 2;
  CHECK(to_canonical_json(run_identities(cfg, Exec::Parallel)) ==
        to_canonical_json(run_identities(cfg, Exec::Serial)));
}

TEST_CASE("command line") {
  const std::string flat = temp_file("flat.yaml", "n: 4\nk: 2\npoints: 2\n");
  const Run ok = run_tool("identities --spec " + flat);
  CHECK(ok.code == 0);
  CHECK(ok.out.rfind("{\"checks\": [", 0) == 0);
  CHECK(ok.out.find("\"pass\": true") != std::string::npos);
  // a report file gets the same content as stdout, apart from the timing
  const auto report = (std::filesystem::temp_directory_path() / "ckp_test_report.json").string();
  CHECK(run_tool("identities --spec " + flat + " --report " + report).code == 0);
  std::stringstream text;
  text << std::ifstream(report).rdbuf();
  auto strip = [](std::string s) {
    auto j = nlohmann::json::parse(s);
    j.erase("timing_seconds");
    return canonical_dump(j);
  };
  CHECK(strip(text.str()) == strip(ok.out));
  CHECK(run_tool("identities --spec " + flat + " --n 5 --k 3 --points 1 --seed 3").code == 0);
  CHECK(run_tool("").code == 2);
  CHECK(run_tool("frobnicate").code == 2);
  CHECK(run_tool("identities --points nope").code == 2);
  CHECK(run_tool("identities --n 3").code == 2);
  CHECK(run_tool("identities --spec /nonexistent.yaml").code == 2);
  CHECK(run_tool("obstruction --k 1").code == 2);
  CHECK(run_tool("holonomy --spec " + temp_file("pert.yaml", "family: perturbed\n")).code == 2);
  CHECK(run_tool("identities --spec " + temp_file("bad.yaml", "n: [4\n")).code == 2);
  CHECK(run_tool("identities --spec " + temp_file("badexpr.yaml", "rescale: 'sin('\n")).code == 2);
  // an impossible tolerance makes the relative checks fail
  CHECK(run_tool("prolong --spec " + temp_file("pert2.yaml", "family: perturbed\npoints: 1\n") + " --tol 1e-300").code == 1);
  CHECK(run_tool("--help").code == 0);
}
