#include "ckp/curvature.hpp"

#include <algorithm>
#include <cmath>

namespace ckp {

JetTensor inverse(const JetTensor& g) {
  const int n = g.dim();
  // Gauss-Jordan on jets; pivots chosen by value
  std::vector<Jet> a(g.data());
  JetTensor inv(n, IndexSpec{{Variance::Contravariant, Variance::Contravariant}, {}, -2});
  std::vector<Jet>& b = inv.data();
  for (int i = 0; i < n; ++i) b[i * n + i] = Jet(1.0);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col].value()) > std::abs(a[piv * n + col].value())) piv = r;
    if (std::abs(a[piv * n + col].value()) < 1e-14) throw std::domain_error("inverse: singular matrix");
    if (piv != col)
      for (int j = 0; j < n; ++j) {
        std::swap(a[piv * n + j], a[col * n + j]);
        std::swap(b[piv * n + j], b[col * n + j]);
      }
    Jet r = reciprocal(a[col * n + col]);
    for (int j = 0; j < n; ++j) {
      a[col * n + j] = a[col * n + j] * r;
      b[col * n + j] = b[col * n + j] * r;
    }
    for (int row = 0; row < n; ++row) {
      if (row == col) continue;
      Jet fac = a[row * n + col];
      for (int j = 0; j < n; ++j) {
        Jet::fma(a[row * n + j], fac, a[col * n + j], -1.0);
        Jet::fma(b[row * n + j], fac, b[col * n + j], -1.0);
      }
    }
  }
  return inv;
}

namespace {

// covariant derivative of an all-lower jet tensor, derivative index first
JetTensor cov(const JetTensor& t, const JetTensor& Gamma) {
  const int n = t.dim(), r = t.rank();
  JetTensor out(n, r + 1, t.spec().weight);
  int idx[kMaxRank + 1], src[kMaxRank];
  for (std::size_t o = 0; o < out.size(); ++o) {
    out.unravel(o, idx);
    const int u = idx[0];
    for (int i = 0; i < r; ++i) src[i] = idx[i + 1];
    Jet acc = t[t.offset(src)].derivative(u);
    for (int i = 0; i < r; ++i) {
      const int ai = idx[i + 1];
      for (int q = 0; q < n; ++q) {
        src[i] = q;
        Jet::fma(acc, Gamma(q, u, ai), t[t.offset(src)], -1.0);
      }
      src[i] = ai;
    }
    out[o] = acc;
  }
  return out;
}

}  // namespace

CurvaturePack curvature_pack(const JetTensor& g) {
  const int n = g.dim();
  if (n < 4) throw UnsupportedDimension("curvature: n must be at least 4");
  const int J = g[0].is_constant() ? Jet::kConst : g[0].order();
  if (J < 3) throw std::invalid_argument("curvature: metric jets of order >= 3 required");
  CurvaturePack p;
  p.n = n;
  p.order = J;
  p.g = g;
  p.ginv = inverse(g);

  // d_c g_ab
  std::vector<Jet> dg(n * n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) dg[(a * n + b) * n + c] = g(a, b).derivative(c);
  auto DG = [&](int a, int b, int c) -> const Jet& { return dg[(a * n + b) * n + c]; };

  p.Gamma = JetTensor(n, IndexSpec{{Variance::Contravariant, Variance::Covariant, Variance::Covariant}, {}, 0});
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = b; c < n; ++c) {
        Jet acc(0.0);
        for (int d = 0; d < n; ++d) {
          Jet t = DG(d, c, b) + DG(d, b, c) - DG(b, c, d);
          Jet::fma(acc, p.ginv(a, d), t, 0.5);
        }
        p.Gamma(a, b, c) = acc;
        p.Gamma(a, c, b) = acc;
      }

  // R^a_{bcd}
  std::vector<Jet> dGam(n * n * n * n);  // d_e Gamma^a_bc at [(a,b,c),e]
  for (std::size_t o = 0; o < p.Gamma.size(); ++o)
    for (int e = 0; e < n; ++e) dGam[o * n + e] = p.Gamma[o].derivative(e);
  auto dG = [&](int a, int b, int c, int e) -> const Jet& { return dGam[((a * n + b) * n + c) * n + e]; };
  JetTensor Rup(n, 4);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = c + 1; d < n; ++d) {
          Jet acc = dG(a, d, b, c) - dG(a, c, b, d);
          for (int e = 0; e < n; ++e) {
            Jet::fma(acc, p.Gamma(a, c, e), p.Gamma(e, d, b));
            Jet::fma(acc, p.Gamma(a, d, e), p.Gamma(e, c, b), -1.0);
          }
          Rup(a, b, c, d) = acc;
          Rup(a, b, d, c) = -acc;
        }
  p.Riem = JetTensor(n, 4, 2);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = c + 1; d < n; ++d) {
          Jet acc(0.0);
          for (int e = 0; e < n; ++e) Jet::fma(acc, p.g(a, e), Rup(e, b, c, d));
          p.Riem(a, b, c, d) = acc;
          p.Riem(a, b, d, c) = -acc;
        }
  p.Ric = JetTensor(n, 2, 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Jet acc(0.0);
      for (int c = 0; c < n; ++c) acc += Rup(c, a, c, b);
      p.Ric(a, b) = acc;
    }
  p.R = Jet(0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) Jet::fma(p.R, p.ginv(a, b), p.Ric(a, b));
  p.P = JetTensor(n, 2, 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Jet v = p.Ric(a, b);
      Jet::fma(v, p.R, p.g(a, b), -1.0 / (2.0 * (n - 1)));
      p.P(a, b) = v * (1.0 / (n - 2));
    }
  p.C = JetTensor(n, 4, 2);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          Jet v = p.Riem(a, b, c, d);
          Jet::fma(v, p.g(a, c), p.P(b, d), -1.0);
          Jet::fma(v, p.g(a, d), p.P(b, c), 1.0);
          Jet::fma(v, p.g(b, d), p.P(a, c), -1.0);
          Jet::fma(v, p.g(b, c), p.P(a, d), 1.0);
          p.C(a, b, c, d) = v;
        }
  p.DP = cov(p.P, p.Gamma);
  p.A = JetTensor(n, 3, 0);
  for (int e = 0; e < n; ++e)
    for (int c1 = 0; c1 < n; ++c1)
      for (int c2 = 0; c2 < n; ++c2) p.A(e, c1, c2) = p.DP(c1, c2, e) - p.DP(c2, c1, e);
  p.DC = cov(p.C, p.Gamma);
  return p;
}

CurvaturePack curvature_pack(const MetricChart& chart, const std::vector<double>& x, int jet_order) {
  return curvature_pack(chart.metric_jet(x, jet_order));
}

RescaledPack conformal_rescale_pack(const MetricChart& chart, const Expr& f,
                                    const std::vector<double>& x, int jet_order) {
  RescaledPack r;
  MetricChart hat = MetricChart::conformal(chart, f);
  r.pack = curvature_pack(hat, x, jet_order);
  auto vars = coordinate_jets(x, jet_order);
  r.f = f.eval(vars);
  if (r.f.is_constant()) {
    Jet z = Jet::zero(MonomialTable::get(chart.dim(), jet_order), jet_order);
    z.coeff_ref(0) = r.f.value();
    r.f = z;
  }
  for (int i = 0; i < chart.dim(); ++i) r.upsilon.push_back(r.f.derivative(i));
  return r;
}

Tensor covariant_derivative(const CurvaturePack& p, const JetTensor& t) { return values(cov(t, p.Gamma)); }

IdentityResiduals identity_residuals(const CurvaturePack& p) {
  const int n = p.n;
  Tensor g = values(p.g), gi = values(p.ginv), C = values(p.C), A = values(p.A), DC = values(p.DC),
         Rm = values(p.Riem);
  IdentityResiduals r;
  // Weyl traces over every index pair
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) r.weyl_trace = std::max(r.weyl_trace, max_abs(trace(C, i, j, &gi)));
  // alternation over any 3 indices
  const std::vector<std::vector<int>> triples = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
  for (const auto& t : triples) {
    r.weyl_alt3 = std::max(r.weyl_alt3, max_abs(antisymmetrize(C, t)));
    r.first_bianchi = std::max(r.first_bianchi, max_abs(antisymmetrize(Rm, t)));
  }
  r.cotton_alt3 = max_abs(antisymmetrize(A, {0, 1, 2}));
  // D_[a C_bc]de - g_d[a A_|e|bc] + g_e[a A_|d|bc]
  Tensor lhs = antisymmetrize(DC, {0, 1, 2});
  Tensor rhs(n, 5);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          for (int e = 0; e < n; ++e) rhs(a, b, c, d, e) = g(d, a) * A(e, b, c) - g(e, a) * A(d, b, c);
  rhs = antisymmetrize(rhs, {0, 1, 2});
  lhs -= rhs;
  r.bianchi = max_abs(lhs);
  return r;
}

DhatWeyl dhat_weyl(const CurvaturePack& p, const RescaledPack& r) {
  const int n = p.n;
  Tensor g = values(p.g), gi = values(p.ginv), C = values(p.C), A = values(p.A), DC = values(p.DC);
  std::vector<double> U(n), Uu(n, 0.0);
  for (int a = 0; a < n; ++a) U[a] = r.upsilon[a].value();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) Uu[a] += gi(a, b) * U[b];
  const double e2f = std::exp(2.0 * r.f.value());
  DhatWeyl out;
  out.direct = values(r.pack.DC);
  out.direct *= 1.0 / e2f;
  Tensor YC(n, 3);  // Y^e C_ebcd
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c)
      for (int d = 0; d < n; ++d)
        for (int e = 0; e < n; ++e) YC(b, c, d) += Uu[e] * C(e, b, c, d);
  out.printed = Tensor(n, 5);
  out.corrected = Tensor(n, 5);
  for (int u = 0; u < n; ++u)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            double base = DC(u, a, b, c, d) - 2 * U[u] * C(a, b, c, d) -
                          (U[a] * C(u, b, c, d) - U[b] * C(u, a, c, d)) -
                          (U[c] * C(u, d, a, b) - U[d] * C(u, c, a, b));
            double pa = (n - 3) * ((g(u, a) * A(b, c, d) - g(u, b) * A(a, c, d)) +
                                   (g(u, c) * A(d, a, b) - g(u, d) * A(c, a, b)));
            double ca = (g(u, a) * YC(b, c, d) - g(u, b) * YC(a, c, d)) +
                        (g(u, c) * YC(d, a, b) - g(u, d) * YC(c, a, b));
            out.printed(u, a, b, c, d) = base + pa;
            out.corrected(u, a, b, c, d) = base + ca;
          }
  return out;
}

}  // namespace ckp
