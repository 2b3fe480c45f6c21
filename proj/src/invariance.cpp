#include "ckp/invariance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ckp/tractor.hpp"

namespace ckp {

namespace {

const int* none = nullptr;

int h_kmin(int i) {
  if (i == 5 || i == 6) return 3;
  if (i == 8 || i == 9) return 1;
  return 2;
}

HCoefficients hc(std::initializer_list<std::pair<int, Rational>> terms) {
  HCoefficients c;
  c.fill(Rational(0));
  for (const auto& [i, v] : terms) c[i - 1] = v;
  return c;
}

// rows of the top slot of C1
Eigen::MatrixXd top_rows(const ChainSpace& T1, const Eigen::MatrixXd& m) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    if (T1.slot_of(i) == kRho) out.row(i) = m.row(i);
  return out;
}

// relative, with a floor so rounding noise is not amplified when C vanishes
double rel(const Eigen::MatrixXd& d, const Eigen::MatrixXd& ref) { return d.norm() / std::max(ref.norm(), 1e-3); }

}  // namespace

Eigen::MatrixXd h_map(const PointData& pd, int i) {
  if (i < 1 || i > kHCount) throw std::out_of_range("H index");
  if (static_cast<int>(pd.U.size()) != pd.n) throw std::invalid_argument("H maps need rescale data");
  const int n = pd.n, k = pd.k;
  const auto& T0 = ChainSpace::get(n, k, 0);
  const auto& T1 = ChainSpace::get(n, k, 1);
  JetMatrix M = new_matrix(pd, T1, T0);
  if (k < h_kmin(i)) return M.value();
  std::vector<double> U(n), Uu(n);
  for (int a = 0; a < n; ++a) U[a] = pd.U[a].value(), Uu[a] = pd.Uu[a].value();
  auto g = [&](int a, int b) { return pd.g(a, b).value(); };
  auto Cuu = [&](int a, int b, int p, int q) { return pd.Cuu(a, b, p, q).value(); };
  auto C3u = [&](int a, int b, int c, int p) { return pd.C3u(a, b, c, p).value(); };
  build(M, T1, kRho, T0, true, [&](const int* c, const int* a, Emit& e) {
    const int c0 = c[0];
    for (int p = 0; p < n; ++p) {
      if (i >= 7) {
        for (int d = 0; d < n; ++d) {
          if (i == 7)
            e(U[d] * Cuu(a[0], a[1], d, p), none, kSigma, Tup().add(c0).add(p).add(a + 2, k - 2));
          else if (i == 8)
            e(Uu[d] * C3u(d, a[0], c0, p), none, kSigma, Tup().add(p).add(a + 1, k - 1));
          else
            e(U[d] * Cuu(c0, a[0], d, p), none, kSigma, Tup().add(p).add(a + 1, k - 1));
        }
        continue;
      }
      for (int q = 0; q < n; ++q) {
        switch (i) {
          case 1: e(U[c0] * Cuu(a[0], a[1], p, q), none, kSigma, Tup().add(p).add(q).add(a + 2, k - 2)); break;
          case 2: e(U[a[0]] * Cuu(c0, a[1], p, q), none, kSigma, Tup().add(p).add(q).add(a + 2, k - 2)); break;
          case 3: e(Uu[p] * C3u(a[0], a[1], c0, q), none, kSigma, Tup().add(p).add(q).add(a + 2, k - 2)); break;
          case 4:
            for (int d = 0; d < n; ++d)
              e(g(c0, a[0]) * Uu[d] * Cuu(d, a[1], p, q), none, kSigma, Tup().add(p).add(q).add(a + 2, k - 2));
            break;
          case 5:
            e(U[a[0]] * Cuu(a[1], a[2], p, q), none, kSigma, Tup().add(c0).add(p).add(q).add(a + 3, k - 3));
            break;
          case 6:
            for (int u = 0; u < n; ++u)
              e(g(c0, a[0]) * Uu[u] * Cuu(a[1], a[2], p, q), none, kSigma,
                Tup().add(u).add(p).add(q).add(a + 3, k - 3));
            break;
          default: break;
        }
      }
    }
  });
  return M.value();
}

std::vector<Eigen::MatrixXd> h_maps(const PointData& pd) {
  std::vector<Eigen::MatrixXd> h;
  for (int i = 1; i <= kHCount; ++i) h.push_back(h_map(pd, i));
  return h;
}

Eigen::MatrixXd h_combination(const std::vector<Eigen::MatrixXd>& h, const HCoefficients& c) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(h.at(0).rows(), h.at(0).cols());
  for (int i = 0; i < kHCount; ++i)
    if (c[i].numerator() != 0) out += to_double(c[i]) * h.at(i);
  return out;
}

std::vector<HattedLaw> hatted_laws(int k_) {
  const Rational k(k_);
  return {
      {MapId::E1, hc({{9, 2}, {2, -(k - 1)}})},
      {MapId::E2, hc({{1, 1}, {7, -2}, {5, -(k - 2)}})},
      {MapId::T1, hc({{3, -1}})},
      {MapId::T2, hc({{6, -1}})},
      {MapId::F1, hc({{8, 1}})},
      {MapId::F2, hc({{9, 1}})},
      {MapId::F3, hc({{7, 1}})},
      {MapId::F4, hc({{4, 1}})},
      {MapId::G1, hc({{1, -2}, {2, -2}, {3, -2}, {4, 2}, {7, 2}})},
      {MapId::G2, hc({{1, -1}, {2, -1}, {3, -1}, {7, 1}, {8, 2}})},
      {MapId::G3, hc({{1, -1}, {2, -1}, {3, -1}, {4, 1}, {9, 2}})},
  };
}

HCoefficients trans1_coefficients(int n, int k_, TableReading reading) {
  const PsiCoefficients c = psi_coefficients(n, k_);
  const Rational k(k_);
  const Rational g = 2 * c.g1 + c.g2 + c.g3;
  HCoefficients t = hc({{1, c.e2 - g},
                        {6, -c.t2},
                        {2, -(k - 1) * c.e1 - g},
                        {7, -2 * c.e2 + c.f3 + 2 * c.g1 + c.g2},
                        {3, -c.t1 - g},
                        {8, c.f1 + 2 * c.g2},
                        {4, c.f4 + 2 * c.g1 + c.g3},
                        {9, 2 * c.e1 + c.f2 + 2 * c.g3},
                        {5, -(k - 2) * c.e2}});
  if (reading == TableReading::Literal) {
    t[1] = -((k - 1) * c.e1 - g);
    t[2] = -(c.t1 - g);
  }
  return t;
}

HCoefficients trans2_coefficients(int n, int k_, TableReading reading) {
  const PsiCoefficients c = psi_coefficients(n, k_);
  const Rational k(k_);
  HCoefficients t = hc({{1, -c.l2 / (k + 1)},
                        {2, -k * c.r1},
                        {3, (k - 1) / (k + 1) * c.l1},
                        {4, 2 / (k + 1) * c.l2},
                        {5, -k * c.r2},
                        {6, (k - 2) / (k + 1) * c.l2},
                        {8, -2 / (k + 1) * c.l1}});
  if (reading == TableReading::Literal) {
    t[1] = -c.r1;
    t[5] = (k - 1) / (k + 1) * c.l2;
  }
  return t;
}

TableComparison compare_tables(int n, int k, TableReading reading) {
  TableComparison r{n, k, {}};
  const HCoefficients a = trans1_coefficients(n, k, reading), b = trans2_coefficients(n, k, reading);
  for (int i = 0; i < kHCount; ++i)
    if (a[i] != b[i]) r.mismatched.push_back(i + 1);
  return r;
}

RescaledPoint rescaled_point(const MetricChart& chart, const Expr& f, const std::vector<double>& x, int k,
                             int jet_order) {
  const RescaledPack rp = conformal_rescale_pack(chart, f, x, jet_order);
  RescaledPoint r;
  r.g = point_data(curvature_pack(chart, x, jet_order), k, 0);
  r.g.set_rescale(rp.upsilon);
  r.gh = point_data(rp.pack, k, 0);
  r.T = transform_matrix(r.g, rp.f).value();
  r.T1 = blockwise(r.T, chart.dim());
  r.weight = std::exp((k - 1) * rp.f.value());
  return r;
}

InvarianceResult invariance_check(const RescaledPoint& rp) {
  const PointData& pd = rp.g;
  const auto& T1 = ChainSpace::get(pd.n, pd.k, 1);
  const std::vector<Eigen::MatrixXd> h = h_maps(pd);
  InvarianceResult r;

  for (const HattedLaw& law : hatted_laws(pd.k)) {
    if (pd.k < map_kmin(law.map)) continue;
    const Eigen::MatrixXd X = catalogue_map(pd, law.map).value();
    const Eigen::MatrixXd Xh = catalogue_map(rp.gh, law.map).value();
    const Eigen::MatrixXd lhs = top_rows(T1, Xh * rp.T) / rp.weight - top_rows(T1, X);
    r.hatted.emplace_back(map_name(law.map), rel(lhs - h_combination(h, law.coeff), X));
  }

  Eigen::MatrixXd mid = Eigen::MatrixXd::Zero(T1.dim(), rp.T.cols()), mid_ref = mid;
  for (MapId id : {MapId::L1, MapId::L2, MapId::R1, MapId::R2}) {
    const Eigen::MatrixXd X = catalogue_map(pd, id).value();
    const Eigen::MatrixXd d = catalogue_map(rp.gh, id).value() * rp.T - rp.T1 * X;
    for (int i = 0; i < d.rows(); ++i) {
      const int s = T1.slot_of(i);
      if (s != kPhi && s != kMu) continue;
      mid.row(i) += d.row(i);
      mid_ref.row(i) += (rp.T1 * X).row(i);
    }
  }
  r.middle = rel(mid, mid_ref);

  const Eigen::MatrixXd P = psi_matrix(pd, PsiStage::Full).value();
  const Eigen::MatrixXd Ph = psi_matrix(rp.gh, PsiStage::Full).value();
  const Eigen::MatrixXd top = top_rows(T1, P);
  const Eigen::MatrixXd d1 = top_rows(T1, Ph * rp.T) / rp.weight - top;
  const Eigen::MatrixXd d2 = top_rows(T1, rp.T1 * P) / rp.weight - top;
  auto against = [&](const Eigen::MatrixXd& d, const HCoefficients& c) { return rel(d - h_combination(h, c), d); };
  r.trans1 = against(d1, trans1_coefficients(pd.n, pd.k, TableReading::Corrected));
  r.trans2 = against(d2, trans2_coefficients(pd.n, pd.k, TableReading::Corrected));
  r.trans1_literal = against(d1, trans1_coefficients(pd.n, pd.k, TableReading::Literal));
  r.trans2_literal = against(d2, trans2_coefficients(pd.n, pd.k, TableReading::Literal));
  r.psi_norm = P.norm();
  r.naturality = rel(Ph * rp.T - rp.T1 * P, P);
  return r;
}

}  // namespace ckp
