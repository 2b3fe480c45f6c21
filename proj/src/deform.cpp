#include "ckp/deform.hpp"

#include <stdexcept>

#include "ckp/tractor.hpp"

namespace ckp {

namespace {

const int* none = nullptr;

struct MapShape {
  int out, in, kmin;
};

MapShape shape(MapId id) {
  switch (id) {
    case MapId::L1: return {kPhi, kSigma, 1};
    case MapId::L2: return {kPhi, kSigma, 2};
    case MapId::R1: return {kMu, kSigma, 2};
    case MapId::R2: return {kMu, kSigma, 3};
    case MapId::E1: return {kRho, kPhi, 1};
    case MapId::E2: return {kRho, kPhi, 2};
    case MapId::T1: return {kRho, kMu, 2};
    case MapId::T2: return {kRho, kMu, 3};
    case MapId::F1: return {kRho, kSigma, 1};
    case MapId::F2: return {kRho, kSigma, 1};
    case MapId::F3: return {kRho, kSigma, 2};
    case MapId::F4: return {kRho, kSigma, 2};
    default: return {kRho, kSigma, 2};  // G*
  }
}

}  // namespace

const char* map_name(MapId id) {
  static const char* names[kMapCount] = {"L1", "L2", "R1", "R2", "E1", "E2", "T1", "T2",
                                         "F1", "F2", "F3", "F4", "G1", "G2", "G3"};
  return names[static_cast<int>(id)];
}

MapId map_from_index(int i) {
  if (i < 0 || i >= kMapCount) throw std::out_of_range("map index");
  return static_cast<MapId>(i);
}

int map_kmin(MapId id) { return shape(id).kmin; }

JetMatrix catalogue_map(const PointData& pd, MapId id) {
  const int n = pd.n, k = pd.k;
  const auto& T0 = ChainSpace::get(n, k, 0);
  const auto& T1 = ChainSpace::get(n, k, 1);
  JetMatrix M = new_matrix(pd, T1, T0);
  const MapShape sh = shape(id);
  if (k < sh.kmin) return M;
  const bool needs_dc = sh.out == kRho && id != MapId::E1 && id != MapId::E2 && id != MapId::T1 && id != MapId::T2;
  if (needs_dc && !pd.has_dc) throw std::invalid_argument(std::string(map_name(id)) + " needs Cotton jets");
  build(M, T1, sh.out, T0, true, [&](const int* c, const int* a, Emit& e) {
    const int c0 = c[0];
    for (int p = 0; p < n; ++p) {
      switch (id) {
        case MapId::L1: e(pd.C3u(a[0], a[1], c0, p), 1.0, none, kSigma, Tup().add(p).add(a + 2, k - 1)); break;
        case MapId::T1: e(pd.Ccp(c0, p, a[0], a[1]), 1.0, none, kMu, Tup().add(p).add(a + 2, k - 2)); break;
        case MapId::F1: e(pd.Aabp(a[0], c0, p), 1.0, none, kSigma, Tup().add(p).add(a + 1, k - 1)); break;
        case MapId::F2: e(pd.Aup(p, c0, a[0]), 1.0, none, kSigma, Tup().add(p).add(a + 1, k - 1)); break;
        case MapId::F3: e(pd.Aup(p, a[0], a[1]), 1.0, none, kSigma, Tup().add(c0).add(p).add(a + 2, k - 2)); break;
        default:
          for (int q = 0; q < n; ++q) {
            switch (id) {
              case MapId::L2:
                e(pd.g(c0, a[0]), pd.Cuu(a[1], a[2], p, q), 1.0, none, kSigma,
                  Tup().add(p).add(q).add(a + 3, k - 2));
                break;
              case MapId::R1:
                e(pd.Cuu(c0, a[0], p, q), 1.0, none, kSigma, Tup().add(p).add(q).add(a + 1, k - 2));
                break;
              case MapId::R2:
                e(pd.Cuu(a[0], a[1], p, q), 1.0, none, kSigma, Tup().add(c0).add(p).add(q).add(a + 2, k - 3));
                break;
              case MapId::E1:
                e(pd.Cuu(c0, a[0], p, q), 1.0, none, kPhi, Tup().add(p).add(q).add(a + 1, k - 1));
                break;
              case MapId::E2:
                e(pd.Cuu(a[0], a[1], p, q), 1.0, none, kPhi, Tup().add(c0).add(p).add(q).add(a + 2, k - 2));
                break;
              case MapId::T2:
                e(pd.g(c0, a[0]), pd.Cuu(a[1], a[2], p, q), 1.0, none, kMu, Tup().add(p).add(q).add(a + 3, k - 3));
                break;
              case MapId::F4:
                e(pd.g(c0, a[0]), pd.Auu(a[1], p, q), 1.0, none, kSigma, Tup().add(p).add(q).add(a + 2, k - 2));
                break;
              case MapId::G1:
                e(pd.DCuu(c0, a[0], a[1], p, q), 1.0, none, kSigma, Tup().add(p).add(q).add(a + 2, k - 2));
                break;
              case MapId::G2:
                e(pd.DuC(p, c0, q, a[0], a[1]), 1.0, none, kSigma, Tup().add(p).add(q).add(a + 2, k - 2));
                break;
              case MapId::G3:
                e(pd.DCuu(a[0], c0, a[1], p, q), 1.0, none, kSigma, Tup().add(p).add(q).add(a + 2, k - 2));
                break;
              default: break;
            }
          }
      }
    }
  });
  return M;
}

std::vector<std::pair<std::string, Rational>> PsiCoefficients::table() const {
  return {{"lambda1", l1}, {"lambda2", l2}, {"rho1", r1}, {"rho2", r2},   {"epsilon1", e1},
          {"epsilon2", e2}, {"tau1", t1},   {"tau2", t2}, {"phi1", f1},   {"phi2", f2},
          {"phi3", f3},     {"phi4", f4},   {"gamma1", g1}, {"gamma2", g2}, {"gamma3", g3}};
}

Rational PsiCoefficients::of(MapId id) const {
  const Rational all[kMapCount] = {l1, l2, r1, r2, e1, e2, t1, t2, f1, f2, f3, f4, g1, g2, g3};
  return all[static_cast<int>(id)];
}

PsiCoefficients psi_coefficients(int n_, int k_) {
  const Rational n(n_), k(k_);
  PsiCoefficients c;
  c.l1 = (1 + k) / 2;
  c.l2 = (k - 1) * (k + 1) / (2 * n);
  c.r1 = (k - 1) * (n - 2) / (2 * (n - k) * n);
  c.r2 = (2 - 3 * k + k * k) / (2 * (k - n) * n);
  c.e1 = (k - 1) / (2 * (n - k));
  c.e2 = (k - 1) * k / (2 * (k - n) * n);
  c.t1 = (k - 1) * (n * (n - k + 1) - 2 * k) / (2 * (k - n) * n);
  c.t2 = -(k - 2) * (k - 1) / (2 * n);
  c.f1 = -(n + k - 3) / (n - 2);
  c.f2 = (1 - k) / n;
  c.f3 = (k - 1) * (n + k) / (2 * (k - n) * n);
  c.f4 = (k - 1) * (2 + k - 2 * n) / (2 * (k - n) * (n - 2));
  c.g1 = -(k - 1) / (2 * (n - 2) * n);
  c.g2 = (k - 1) / (2 * (n - 2));
  c.g3 = (k - 1) * k / (2 * (k - n) * n);
  return c;
}

JetMatrix psi_matrix(const PointData& pd, PsiStage stage) {
  const PsiCoefficients c = psi_coefficients(pd.n, pd.k);
  const int last = stage == PsiStage::One ? static_cast<int>(MapId::R2) : kMapCount - 1;
  JetMatrix psi = new_matrix(pd, ChainSpace::get(pd.n, pd.k, 1), ChainSpace::get(pd.n, pd.k, 0));
  for (int i = 0; i <= last; ++i) {
    const MapId id = map_from_index(i);
    const Rational r = c.of(id);
    if (r.numerator() == 0) continue;
    psi += catalogue_map(pd, id) * to_double(r);
  }
  return psi;
}

JetMatrix delstar_K_closed(const PointData& pd) {
  const double k = pd.k;
  return catalogue_map(pd, MapId::F1) * (2 * k) + catalogue_map(pd, MapId::F2) * (2 * k) -
         catalogue_map(pd, MapId::E1) * k + catalogue_map(pd, MapId::T1) * (k * (k - 1)) -
         catalogue_map(pd, MapId::L1) * (k * (k + 1)) - catalogue_map(pd, MapId::R1) * (k - 1);
}

Eigen::MatrixXd weyl_action_matrix(const PointData& pd) {
  const int n = pd.n, k = pd.k;
  const auto& in = ChainSpace::product(n, 0, k);
  const auto& out = ChainSpace::product(n, 2, k);
  JetMatrix M = new_matrix(pd, out, in);
  build(M, out, 0, in, true, [&](const int* c, const int* a, Emit& e) {
    for (int p = 0; p < n; ++p) e(pd.C3u(c[0], c[1], a[0], p), 1.0, none, 0, Tup().add(p).add(a + 1, k - 1));
  });
  return M.value();
}

Eigen::MatrixXd obstruction_matrix(const PointData& pd) {
  if (pd.k < 2) throw std::invalid_argument("obstruction needs k >= 2");
  return project_H2_matrix(pd) * weyl_action_matrix(pd);
}

NormalizationResult normalization(const PointData& pd1, const PointData& pd0) {
  // relative size; the floor keeps rounding noise from being amplified when the
  // curvature vanishes (conformally flat)
  auto ratio = [](double a, double b) { return a / std::max(b, 1e-3); };
  NormalizationResult r;
  const auto& T1 = ChainSpace::get(pd0.n, pd0.k, 1);
  const auto& T0 = ChainSpace::get(pd0.n, pd0.k, 0);
  const JetMatrix A = connection_matrix(pd1);
  const JetMatrix psi1 = psi_matrix(pd1, PsiStage::One);
  const JetMatrix psi = psi_matrix(pd1, PsiStage::Full);
  const Eigen::MatrixXd ds = partial_star_matrix(pd0, 2).value();
  const Eigen::MatrixXd K = curvature_action(pd0).value();

  const Eigen::MatrixXd R = connection_curvature(A + psi).value();
  r.curvature_norm = R.norm();
  r.full = ratio((ds * R).norm(), R.norm());

  const Eigen::MatrixXd R1 = connection_curvature(A + psi1).value();
  const Eigen::MatrixXd Y1 = ds * R1;
  double mid = 0, top = 0;
  for (int i = 0; i < Y1.rows(); ++i) {
    const int s = T1.slot_of(i);
    const double row = Y1.row(i).squaredNorm();
    if (s == kPhi || s == kMu) mid += row;
    if (s == kRho) top += row;
  }
  r.psi1_middle = ratio(std::sqrt(mid), R1.norm());
  r.psi1_top = ratio(std::sqrt(top), R1.norm());
  const Eigen::MatrixXd expand = K + exterior_derivative_end(A, psi1).value();
  r.stage1 = ratio((R1 - expand).norm(), R1.norm());

  const auto& T2 = ChainSpace::get(pd0.n, pd0.k, 2);
  const Eigen::MatrixXd E2 = slot_embedding(T2, kSigma), E0 = slot_embedding(T0, kSigma);
  const Eigen::MatrixXd Kss = E2.transpose() * K * E0;
  const Eigen::MatrixXd Dss = E2.transpose() * R * E0 - Kss;
  r.hom0_raw = ratio(Dss.norm(), Kss.norm());
  if (pd0.k >= 2) {
    const Eigen::MatrixXd P = project_H2_matrix(pd0);
    r.hom0_h2 = ratio((P * Dss).norm(), (P * Kss).norm());
  }
  const int order[4] = {0, 1, 1, 2};  // slot grading: sigma < phi, mu < rho
  double neg = 0;
  for (int i = 0; i < R.rows(); ++i)
    for (int j = 0; j < R.cols(); ++j)
      if (order[T2.slot_of(i)] < order[T0.slot_of(j)]) neg = std::max(neg, std::abs(R(i, j)));
  r.negative_shift = neg;
  return r;
}

Eigen::MatrixXd contract_sK(const PointData& pd1) {
  const int n = pd1.n;
  if (pd1.k != 1) throw std::invalid_argument("contract_sK needs k = 1");
  const int N = n + 2;
  const auto& T0 = ChainSpace::get(n, 1, 0);
  const auto& T1 = ChainSpace::get(n, 1, 1);
  const auto& pairs = FormBasis::get(n, 2);
  // standard tractor curvature at the point, blocks (c1 < c2)
  const Eigen::MatrixXd KS = connection_curvature(standard_connection_matrix(pd1)).value();
  auto Kpc = [&](int p, int c) -> Eigen::MatrixXd {
    if (p == c) return Eigen::MatrixXd::Zero(N, N);
    int idx[2] = {std::min(p, c), std::max(p, c)}, sign = 1;
    const int ci = pairs.lookup(idx, &sign);
    return (p < c ? 1.0 : -1.0) * KS.block(ci * N, 0, N, N);
  };
  // so(h) <-> Lambda^2 S <-> T
  const Eigen::MatrixXd h = standard_metric(pd1);
  const std::vector<Eigen::MatrixXd> E = endo_map(h);
  const int np = static_cast<int>(E.size());
  Eigen::MatrixXd Evec(N * N, np);
  for (int j = 0; j < np; ++j) Evec.col(j) = Eigen::Map<const Eigen::VectorXd>(E[j].data(), N * N);
  const Eigen::MatrixXd W = wedge_map(n);
  const Eigen::MatrixXd Winv = W.fullPivLu().inverse();
  const auto Esolve = Evec.colPivHouseholderQr();
  const Eigen::MatrixXd gi = inverse_metric(pd1);

  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(T1.dim(), T0.dim());
  for (int j = 0; j < T0.dim(); ++j) {
    const Eigen::VectorXd pc = Winv.col(j);
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(N, N);
    for (int i = 0; i < np; ++i) X += pc(i) * E[i];
    // projecting part: column rho, rows phi_a, raised with g
    const Eigen::VectorXd xi = gi * X.block(1, 0, n, 1);
    for (int c = 0; c < n; ++c) {
      Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(N, N);
      for (int p = 0; p < n; ++p) Y += xi(p) * Kpc(p, c);
      const Eigen::VectorXd coeffs = Esolve.solve(Eigen::Map<const Eigen::VectorXd>(Y.data(), N * N));
      out.block(T1.index(c, 0, 0), j, T0.dim(), 1) = W * coeffs;
    }
  }
  return out;
}

}  // namespace ckp
