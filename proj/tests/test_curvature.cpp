#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ckp/curvature.hpp"

using namespace ckp;

namespace {

double max_value(const JetTensor& t) { return max_abs(values(t)); }

}  // namespace

TEST_CASE("flat metric has vanishing curvature") {
  const auto pack = curvature_pack(MetricChart::flat(5), {0.1, 0.0, -0.2, 0.3, 0.05}, 4);
  CHECK(max_value(pack.Gamma) == 0.0);
  CHECK(max_value(pack.Riem) == 0.0);
  CHECK(max_value(pack.C) == 0.0);
  CHECK(max_value(pack.A) == 0.0);
  CHECK(max_value(pack.DC) == 0.0);
}

TEST_CASE("round sphere: constant curvature oracle") {
  for (int n : {4, 6}) {
    const double r = 1.7, K = 1 / (r * r);
    const std::vector<double> x = {0.1, -0.05, 0.12, 0.02, 0.0, -0.1};
    const auto pack = curvature_pack(MetricChart::round_sphere(n, r), {x.begin(), x.begin() + n}, 4);
    const Tensor g = values(pack.g), Riem = values(pack.Riem), Ric = values(pack.Ric), P = values(pack.P);
    double err = 0, scale = 0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        err = std::max(err, std::abs(Ric(a, b) - (n - 1) * K * g(a, b)));
        err = std::max(err, std::abs(P(a, b) - K / 2 * g(a, b)));
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            const double exact = K * (g(a, c) * g(b, d) - g(a, d) * g(b, c));
            err = std::max(err, std::abs(Riem(a, b, c, d) - exact));
            scale = std::max(scale, std::abs(exact));
          }
      }
    CHECK(scale > 0.1);
    CHECK(err < 1e-12);
    CHECK(pack.R.value() == doctest::Approx(n * (n - 1) * K));
    CHECK(max_value(pack.C) < 1e-12);
    CHECK(max_value(pack.A) < 1e-12);
    CHECK(max_value(pack.DC) < 1e-11);
  }
}

TEST_CASE("identities on a generic metric") {
  for (int n : {4, 5, 7}) {
    const auto chart = MetricChart::perturbed(n, 0.3, 7);
    CHECK_FALSE(chart.conformally_flat());
    const auto pts = sample_points(n, 3, 11);
    for (const auto& x : pts) {
      const auto pack = curvature_pack(chart, x, 4);
      CHECK(max_value(pack.C) > 1e-3);
      const auto id = identity_residuals(pack);
      CHECK(id.weyl_trace < 1e-12);
      CHECK(id.weyl_alt3 < 1e-12);
      CHECK(id.cotton_alt3 < 1e-12);
      CHECK(id.bianchi < 1e-11);
      CHECK(id.first_bianchi < 1e-12);
    }
  }
}

TEST_CASE("inverse of a jet metric") {
  const auto chart = MetricChart::perturbed(4, 0.3, 3);
  const auto g = chart.metric_jet({0.1, 0.1, -0.1, 0.0}, 3);
  const JetTensor gi = inverse(g);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      Jet s(0.0);
      for (int c = 0; c < 4; ++c) s += g(a, c) * gi(c, b);
      CHECK(s.value() == doctest::Approx(a == b ? 1.0 : 0.0));
      for (int m = 1; m < s.table()->count(3); ++m) CHECK(std::abs(s.coeff(m)) < 1e-13);
    }
}

TEST_CASE("conformal rescaling") {
  const int n = 5;
  const auto chart = MetricChart::perturbed(n, 0.3, 7);
  const Expr f = random_conformal_factor(n, 5);
  const std::vector<double> x = {0.05, -0.1, 0.02, 0.1, 0.0};
  const auto pack = curvature_pack(chart, x, 4);
  const auto rp = conformal_rescale_pack(chart, f, x, 4);
  const double e2f = std::exp(2 * f.eval(x));
  // C_abcd has conformal weight 2
  Tensor d = values(rp.pack.C);
  Tensor c = values(pack.C);
  c *= e2f;
  d -= c;
  CHECK(max_abs(d) < 1e-12 * max_abs(c) + 1e-14);
  // P^ = P - D Upsilon + Upsilon Upsilon - |Upsilon|^2 g / 2
  const Tensor P = values(pack.P), Ph = values(rp.pack.P), g = values(pack.g), gi = values(pack.ginv);
  const Tensor G = values(pack.Gamma);
  std::vector<double> U(n);
  for (int a = 0; a < n; ++a) U[a] = rp.upsilon[a].value();
  double u2 = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) u2 += gi(a, b) * U[a] * U[b];
  double err = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double DU = rp.upsilon[b].partial(a);
      for (int e = 0; e < n; ++e) DU -= G(e, a, b) * U[e];
      err = std::max(err, std::abs(Ph(a, b) - (P(a, b) - DU + U[a] * U[b] - u2 * g(a, b) / 2)));
    }
  CHECK(err < 1e-12);
  // the corrected law for D C holds; the printed one does not in general
  const auto dw = dhat_weyl(pack, rp);
  Tensor dc = dw.direct;
  dc -= dw.corrected;
  CHECK(max_abs(dc) < 1e-11 * (1 + max_abs(dw.direct)));
  Tensor dp = dw.direct;
  dp -= dw.printed;
  CHECK(max_abs(dp) > 1e-4);
}

TEST_CASE("sample points are seeded and bounded") {
  const auto a = sample_points(6, 5, 42), b = sample_points(6, 5, 42), c = sample_points(6, 5, 43);
  CHECK(a == b);
  CHECK(a != c);
  for (const auto& p : a)
    for (double v : p) CHECK(std::abs(v) <= 0.15);
}
