#include "ckp/tractor.hpp"

namespace ckp {

namespace {
const int* none = nullptr;
}

JetMatrix connection_algebraic(const PointData& pd) {
  const int n = pd.n, k = pd.k;
  const auto& T0 = ChainSpace::get(n, k, 0);
  const auto& T1 = ChainSpace::get(n, k, 1);
  JetMatrix M = new_matrix(pd, T1, T0);
  // sigma_c = -phi_{c a..} + k g_{c[a1} mu_{a2..]}
  build(M, T1, kSigma, T0, true, [&](const int* c, const int* a, Emit& e) {
    e(-1.0, none, kPhi, Tup().add(c[0]).add(a, k));
    e(pd.g(c[0], a[0]), k, none, kMu, a + 1);
  });
  // phi_c = (k+1) g_{c[a0} rho_{a1..]} + (k+1) P_{c[a0} sigma_{a1..]}
  build(M, T1, kPhi, T0, true, [&](const int* c, const int* a, Emit& e) {
    e(pd.g(c[0], a[0]), k + 1.0, none, kRho, a + 1);
    e(pd.P(c[0], a[0]), k + 1.0, none, kSigma, a + 1);
  });
  // mu_c = -P_c^p sigma_{p a..} + rho_{c a..}
  build(M, T1, kMu, T0, false, [&](const int* c, const int* a, Emit& e) {
    for (int p = 0; p < n; ++p) e(pd.Pup(c[0], p), -1.0, none, kSigma, Tup().add(p).add(a, k - 1));
    e(1.0, none, kRho, Tup().add(c[0]).add(a, k - 1));
  });
  // rho_c = -P_c^p phi_{p a..} - k P_{c[a1} mu_{a2..]}
  build(M, T1, kRho, T0, true, [&](const int* c, const int* a, Emit& e) {
    for (int p = 0; p < n; ++p) e(pd.Pup(c[0], p), -1.0, none, kPhi, Tup().add(p).add(a, k));
    e(pd.P(c[0], a[0]), -static_cast<double>(k), none, kMu, a + 1);
  });
  return M;
}

JetMatrix gamma_part(const PointData& pd) {
  const int n = pd.n, k = pd.k;
  const auto& T0 = ChainSpace::get(n, k, 0);
  const auto& T1 = ChainSpace::get(n, k, 1);
  JetMatrix M = new_matrix(pd, T1, T0);
  for (int s = 0; s < 4; ++s) {
    const int p = T0.slot_degree(s);
    build(M, T1, s, T0, false, [&](const int* c, const int* a, Emit& e) {
      int t[8];
      for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) t[j] = a[j];
        for (int q = 0; q < n; ++q) {
          t[i] = q;
          e(pd.Gamma(q, c[0], a[i]), -1.0, none, s, t);
        }
      }
    });
  }
  return M;
}

JetMatrix connection_matrix(const PointData& pd) { return connection_algebraic(pd) + gamma_part(pd); }

JetMatrix curvature_action(const PointData& pd) {
  if (!pd.has_dc) throw std::invalid_argument("curvature action needs Cotton jets");
  const int n = pd.n, k = pd.k;
  const auto& T0 = ChainSpace::get(n, k, 0);
  const auto& T2 = ChainSpace::get(n, k, 2);
  JetMatrix M = new_matrix(pd, T2, T0);
  build(M, T2, kSigma, T0, true, [&](const int* c, const int* a, Emit& e) {
    for (int p = 0; p < n; ++p) e(pd.C3u(c[0], c[1], a[0], p), k, none, kSigma, Tup().add(p).add(a + 1, k - 1));
  });
  build(M, T2, kPhi, T0, true, [&](const int* c, const int* a, Emit& e) {
    for (int p = 0; p < n; ++p) e(pd.C3u(c[0], c[1], a[0], p), k + 1.0, none, kPhi, Tup().add(p).add(a + 1, k));
    e(pd.A(a[0], c[0], c[1]), k + 1.0, none, kSigma, a + 1);
  });
  build(M, T2, kMu, T0, true, [&](const int* c, const int* a, Emit& e) {
    if (k >= 2)
      for (int p = 0; p < n; ++p)
        e(pd.C3u(c[0], c[1], a[0], p), k - 1.0, none, kMu, Tup().add(p).add(a + 1, k - 2));
    for (int p = 0; p < n; ++p) e(pd.Aup(p, c[0], c[1]), -1.0, none, kSigma, Tup().add(p).add(a, k - 1));
  });
  build(M, T2, kRho, T0, true, [&](const int* c, const int* a, Emit& e) {
    for (int p = 0; p < n; ++p) e(pd.C3u(c[0], c[1], a[0], p), k, none, kRho, Tup().add(p).add(a + 1, k - 1));
    e(pd.A(a[0], c[0], c[1]), -static_cast<double>(k), none, kMu, a + 1);
    for (int p = 0; p < n; ++p) e(pd.Aup(p, c[0], c[1]), -1.0, none, kPhi, Tup().add(p).add(a, k));
  });
  return M;
}

JetMatrix transform_matrix(const PointData& pd, const Jet& f, TransformReading reading) {
  const int n = pd.n, k = pd.k;
  const auto& T0 = ChainSpace::get(n, k, 0);
  JetMatrix M = new_matrix(pd, T0, T0);
  const Jet ef = exp(f.truncated(pd.order));
  const Jet up = pow(ef, k + 1), dn = pow(ef, k - 1);
  std::vector<Jet> upU(n), dnU(n), dnUu(n);
  for (int a = 0; a < n; ++a) {
    upU[a] = up * pd.U[a];
    dnU[a] = dn * pd.U[a];
    dnUu[a] = dn * pd.Uu[a];
  }
  const Jet halfU2 = dn * pd.U2;
  build(M, T0, kSigma, T0, false, [&](const int*, const int* a, Emit& e) { e(up, 1.0, none, kSigma, a); });
  build(M, T0, kPhi, T0, true, [&](const int*, const int* a, Emit& e) {
    e(up, 1.0, none, kPhi, a);
    e(upU[a[0]], k + 1.0, none, kSigma, a + 1);
  });
  build(M, T0, kMu, T0, false, [&](const int*, const int* a, Emit& e) {
    e(dn, 1.0, none, kMu, a);
    for (int b = 0; b < n; ++b) e(dnUu[b], -1.0, none, kSigma, Tup().add(b).add(a, k - 1));
  });
  build(M, T0, kRho, T0, true, [&](const int*, const int* a, Emit& e) {
    e(dn, 1.0, none, kRho, a);
    for (int b = 0; b < n; ++b) e(dnUu[b], -1.0, none, kPhi, Tup().add(b).add(a, k));
    e(dnU[a[0]], -static_cast<double>(k), none, kMu, a + 1);
    if (reading == TransformReading::Consistent)
      for (int b = 0; b < n; ++b) e(dnU[a[0]], pd.Uu[b], k, none, kSigma, Tup().add(b).add(a + 1, k - 1));
    e(halfU2, -0.5, none, kSigma, a);
  });
  return M;
}

Eigen::MatrixXd blockwise(const Eigen::MatrixXd& m, int blocks) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m.rows() * blocks, m.cols() * blocks);
  for (int b = 0; b < blocks; ++b) out.block(b * m.rows(), b * m.cols(), m.rows(), m.cols()) = m;
  return out;
}

JetMatrix covariant_derivative(const JetMatrix& A, const JetMatrix& s) {
  const int N = s.rows();
  const int n = A.rows() / N;
  JetMatrix out;
  for (int c = 0; c < n; ++c) {
    JetMatrix blk = s.derivative(c) + A.rows_block(c * N, N) * s;
    if (c == 0) out = JetMatrix(n * N, s.cols(), blk.table(), blk.order());
    out.set_rows_block(c * N, blk);
  }
  return out;
}

namespace {
template <class F>
JetMatrix over_pairs(int n, int N, int cols, F&& f) {
  const auto& pairs = FormBasis::get(n, 2);
  JetMatrix out;
  for (int ci = 0; ci < pairs.dim(); ++ci) {
    JetMatrix blk = f(pairs.tuple(ci)[0], pairs.tuple(ci)[1]);
    if (ci == 0) out = JetMatrix(pairs.dim() * N, cols, blk.table(), blk.order());
    out.set_rows_block(ci * N, blk);
  }
  return out;
}
}  // namespace

JetMatrix exterior_derivative(const JetMatrix& A, const JetMatrix& X) {
  const int N = A.cols();
  const int n = A.rows() / N;
  return over_pairs(n, N, X.cols(), [&](int c1, int c2) {
    JetMatrix X1 = X.rows_block(c1 * N, N), X2 = X.rows_block(c2 * N, N);
    return X2.derivative(c1) - X1.derivative(c2) + A.rows_block(c1 * N, N) * X2 - A.rows_block(c2 * N, N) * X1;
  });
}

JetMatrix exterior_derivative_end(const JetMatrix& A, const JetMatrix& Psi) {
  const int N = A.cols();
  const int n = A.rows() / N;
  return over_pairs(n, N, N, [&](int c1, int c2) {
    JetMatrix A1 = A.rows_block(c1 * N, N), A2 = A.rows_block(c2 * N, N);
    JetMatrix P1 = Psi.rows_block(c1 * N, N), P2 = Psi.rows_block(c2 * N, N);
    return P2.derivative(c1) - P1.derivative(c2) + A1 * P2 - P2 * A1 - A2 * P1 + P1 * A2;
  });
}

JetMatrix wedge_end(const JetMatrix& X, const JetMatrix& Y) {
  const int N = X.cols();
  const int n = X.rows() / N;
  return over_pairs(n, N, N, [&](int c1, int c2) {
    return X.rows_block(c1 * N, N) * Y.rows_block(c2 * N, N) - X.rows_block(c2 * N, N) * Y.rows_block(c1 * N, N);
  });
}

JetMatrix connection_curvature(const JetMatrix& A) {
  const int N = A.cols();
  const int n = A.rows() / N;
  return over_pairs(n, N, N, [&](int c1, int c2) {
    JetMatrix A1 = A.rows_block(c1 * N, N), A2 = A.rows_block(c2 * N, N);
    return A2.derivative(c1) - A1.derivative(c2) + A1 * A2 - A2 * A1;
  });
}

// ---------------------------------------------------------------------------

JetMatrix standard_connection_matrix(const PointData& pd) {
  const int n = pd.n, N = n + 2;
  JetMatrix M(n * N, N, pd.tab, pd.order);
  const int rho = 0, sig = n + 1;
  for (int c = 0; c < n; ++c) {
    const int r0 = c * N;
    for (int b = 0; b < n; ++b) M.add(r0 + rho, 1 + b, pd.Pup(c, b), -1.0);
    for (int a = 0; a < n; ++a) {
      for (int q = 0; q < n; ++q) M.add(r0 + 1 + a, 1 + q, pd.Gamma(q, c, a), -1.0);
      M.add(r0 + 1 + a, sig, pd.P(c, a));
      M.add(r0 + 1 + a, rho, pd.g(c, a));
    }
    M.add(r0 + sig, 1 + c, Jet(1.0), -1.0);
  }
  return M;
}

JetMatrix standard_transform_matrix(const PointData& pd, const Jet& f) {
  const int n = pd.n, N = n + 2;
  JetMatrix M(N, N, pd.tab, pd.order);
  const Jet ef = exp(f.truncated(pd.order)), emf = reciprocal(ef);
  const int rho = 0, sig = n + 1;
  M.add(sig, sig, ef);
  for (int a = 0; a < n; ++a) {
    M.add(1 + a, 1 + a, ef);
    M.add(1 + a, sig, ef * pd.U[a]);
    M.add(rho, 1 + a, emf * pd.Uu[a], -1.0);
  }
  M.add(rho, rho, emf);
  M.add(rho, sig, emf * pd.U2, -0.5);
  return M;
}

Eigen::MatrixXd standard_metric(const PointData& pd) {
  const int n = pd.n, N = n + 2;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(N, N);
  h(0, N - 1) = h(N - 1, 0) = 1.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) h(1 + a, 1 + b) = pd.gi(a, b).value();
  return h;
}

JetMatrix standard_split_L(const PointData& pd, const Jet& sigma) {
  const int n = pd.n, N = n + 2;
  if (sigma.is_constant() || sigma.order() < pd.order + 2)
    throw std::invalid_argument("split L: sigma needs two more jet orders than the output");
  std::vector<Jet> d1(n);
  for (int a = 0; a < n; ++a) d1[a] = sigma.derivative(a);
  Jet lap(0.0), trP(0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Jet hess = d1[a].derivative(b);
      for (int c = 0; c < n; ++c) Jet::fma(hess, pd.Gamma(c, a, b), d1[c].truncated(pd.order), -1.0);
      Jet::fma(lap, pd.gi(a, b), hess.truncated(pd.order));
      Jet::fma(trP, pd.gi(a, b), pd.P(a, b));
    }
  JetMatrix s(N, 1, pd.tab, pd.order);
  Jet top = lap + trP * sigma.truncated(pd.order);
  s.add(0, 0, top.truncated(pd.order), -1.0 / n);
  for (int a = 0; a < n; ++a) s.add(1 + a, 0, d1[a].truncated(pd.order));
  s.add(N - 1, 0, sigma.truncated(pd.order));
  return s;
}

Eigen::MatrixXd wedge_map(int n) {
  // slots for k = 1: sigma (1-form), phi (2-form), mu (scalar), rho (1-form)
  const auto& T0 = ChainSpace::get(n, 1, 0);
  const auto& pairs = FormBasis::get(n + 2, 2);
  const int N = n + 2;
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(T0.dim(), pairs.dim());
  const auto& F2 = FormBasis::get(n, 2);
  for (int pi = 0; pi < pairs.dim(); ++pi) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(N), v = Eigen::VectorXd::Zero(N);
    u(pairs.tuple(pi)[0]) = 1.0;
    v(pairs.tuple(pi)[1]) = 1.0;
    const double us = u(N - 1), vs = v(N - 1), ur = u(0), vr = v(0);
    for (int a = 0; a < n; ++a) {
      W(T0.index(0, kSigma, a), pi) = us * v(1 + a) - vs * u(1 + a);
      W(T0.index(0, kRho, a), pi) = ur * v(1 + a) - vr * u(1 + a);
    }
    for (int j = 0; j < F2.dim(); ++j) {
      const int a = F2.tuple(j)[0], b = F2.tuple(j)[1];
      W(T0.index(0, kPhi, j), pi) = u(1 + a) * v(1 + b) - u(1 + b) * v(1 + a);
    }
    W(T0.index(0, kMu, 0), pi) = us * vr - ur * vs;
  }
  return W;
}

std::vector<Eigen::MatrixXd> endo_map(const Eigen::MatrixXd& h) {
  const int N = static_cast<int>(h.rows());
  const auto& pairs = FormBasis::get(N, 2);
  std::vector<Eigen::MatrixXd> E;
  for (int pi = 0; pi < pairs.dim(); ++pi) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(N), v = Eigen::VectorXd::Zero(N);
    u(pairs.tuple(pi)[0]) = 1.0;
    v(pairs.tuple(pi)[1]) = 1.0;
    E.push_back(v * (u.transpose() * h) - u * (v.transpose() * h));
  }
  return E;
}

}  // namespace ckp
