#include "ckp/bgg.hpp"

#include "ckp/tractor.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <random>
#include <stdexcept>

namespace ckp {

namespace {

const int* none = nullptr;

// c . X for the algebraic action underlying d: direction d, input c-prefix cin
// (nullptr at level 0), output a-tuple a; contributes to output slot `slot`
void act_terms(const PointData& pd, int slot, int d, const int* a, Emit& e, const Tup& cin, bool has_c,
               double s) {
  const int k = pd.k;
  const int* ci = has_c ? static_cast<const int*>(cin) : nullptr;
  switch (slot) {
    case kSigma:
      e(-s, ci, kPhi, Tup().add(d).add(a, k));
      e(pd.g(d, a[0]), s * k, ci, kMu, a + 1);
      break;
    case kPhi:
      e(pd.g(d, a[0]), s * (k + 1), ci, kRho, a + 1);
      break;
    case kMu:
      e(s, ci, kRho, Tup().add(d).add(a, k - 1));
      break;
    default:
      break;
  }
}

bool alternates(int slot) { return slot == kSigma || slot == kPhi || slot == kRho; }

// d*: level 1 -> 0 formula, input c-prefix `pre` (one index) prepended to the
// summed index; scale s
void dstar_terms(const PointData& pd, int slot, const int* a, Emit& e, const int* pre, double s) {
  const int n = pd.n, k = pd.k;
  auto cin = [&](int x) {
    Tup t;
    if (pre) t.add(pre[0]);
    return t.add(x);
  };
  switch (slot) {
    case kPhi:
      e(-s * (k + 1), cin(a[0]), kSigma, a + 1);
      break;
    case kMu:
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) e(pd.gi(p, q), s, cin(p), kSigma, Tup().add(q).add(a, k - 1));
      break;
    case kRho:
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) e(pd.gi(p, q), s, cin(p), kPhi, Tup().add(q).add(a, k));
      e(s * k, cin(a[0]), kMu, a + 1);
      break;
    default:
      break;
  }
}

Eigen::MatrixXd form_gram(const Eigen::MatrixXd& gi, const FormBasis& fb) {
  const int p = fb.degree(), d = fb.dim();
  Eigen::MatrixXd G(d, d);
  const double fact = static_cast<double>(factorial(p));
  Eigen::MatrixXd sub(p, p);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (p == 0) {
        G(i, j) = 1.0;
        continue;
      }
      for (int r = 0; r < p; ++r)
        for (int c = 0; c < p; ++c) sub(r, c) = gi(fb.tuple(i)[r], fb.tuple(j)[c]);
      G(i, j) = fact * sub.determinant();
    }
  return G;
}

Eigen::VectorXd random_vector(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = nd(rng);
  return v;
}

}  // namespace

JetMatrix partial_matrix(const PointData& pd, int level) {
  const int n = pd.n, k = pd.k;
  if (level != 0 && level != 1) throw std::invalid_argument("partial: level must be 0 or 1");
  const auto& in = ChainSpace::get(n, k, level);
  const auto& out = ChainSpace::get(n, k, level + 1);
  JetMatrix M = new_matrix(pd, out, in);
  for (int s = 0; s < 4; ++s) {
    if (s == kRho) continue;
    build(M, out, s, in, alternates(s), [&](const int* c, const int* a, Emit& e) {
      if (level == 0) {
        act_terms(pd, s, c[0], a, e, Tup(), false, 1.0);
      } else {
        act_terms(pd, s, c[0], a, e, Tup().add(c[1]), true, 1.0);
        act_terms(pd, s, c[1], a, e, Tup().add(c[0]), true, -1.0);
      }
    });
  }
  return M;
}

JetMatrix partial_star_matrix(const PointData& pd, int level) {
  const int n = pd.n, k = pd.k;
  if (level != 1 && level != 2) throw std::invalid_argument("partial_star: level must be 1 or 2");
  const auto& in = ChainSpace::get(n, k, level);
  const auto& out = ChainSpace::get(n, k, level - 1);
  JetMatrix M = new_matrix(pd, out, in);
  for (int s = kPhi; s <= kRho; ++s) {
    build(M, out, s, in, s != kMu, [&](const int* c, const int* a, Emit& e) {
      if (level == 1)
        dstar_terms(pd, s, a, e, nullptr, 1.0);
      else
        dstar_terms(pd, s, a, e, c, -2.0);
    });
  }
  return M;
}

Eigen::MatrixXd inverse_metric(const PointData& pd) {
  Eigen::MatrixXd gi(pd.n, pd.n);
  for (int a = 0; a < pd.n; ++a)
    for (int b = 0; b < pd.n; ++b) gi(a, b) = pd.gi(a, b).value();
  return gi;
}

Eigen::MatrixXd gram_matrix(const Eigen::MatrixXd& gi, const ChainSpace& sp) {
  const Eigen::MatrixXd cg = form_gram(gi, sp.cbasis());
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(sp.dim(), sp.dim());
  const int ns = static_cast<int>(sp.slots());
  for (int s = 0; s < ns; ++s) {
    const Eigen::MatrixXd sg = form_gram(gi, sp.slot_basis(s)) * slot_weight(sp.k(), s);
    for (int ci = 0; ci < cg.rows(); ++ci)
      for (int cj = 0; cj < cg.cols(); ++cj) {
        if (cg(ci, cj) == 0.0) continue;
        G.block(sp.index(ci, s, 0), sp.index(cj, s, 0), sg.rows(), sg.cols()) = cg(ci, cj) * sg;
      }
  }
  return G;
}

Eigen::MatrixXd KostantOps::box(int level) const {
  if (level == 0) return ds1 * d0;
  if (level == 1) return d0 * ds1 + ds2 * d1;
  throw std::invalid_argument("box: level must be 0 or 1");
}

KostantOps kostant_ops(const PointData& pd) {
  KostantOps o;
  o.n = pd.n;
  o.k = pd.k;
  o.d0 = partial_matrix(pd, 0).value();
  o.d1 = partial_matrix(pd, 1).value();
  o.ds1 = partial_star_matrix(pd, 1).value();
  o.ds2 = partial_star_matrix(pd, 2).value();
  const Eigen::MatrixXd gi = inverse_metric(pd);
  o.G0 = gram_matrix(gi, ChainSpace::get(pd.n, pd.k, 0));
  o.G1 = gram_matrix(gi, ChainSpace::get(pd.n, pd.k, 1));
  o.G2 = gram_matrix(gi, ChainSpace::get(pd.n, pd.k, 2));
  return o;
}

Hodge::Hodge(const KostantOps& ops, int level) {
  const Eigen::MatrixXd box = ops.box(level);
  const Eigen::MatrixXd& G = level == 0 ? ops.G0 : ops.G1;
  const int dim = static_cast<int>(box.rows());
  if (level == 0) {
    up_ = Eigen::MatrixXd::Zero(dim, dim);
    down_ = ops.ds1 * ops.d0;
  } else {
    up_ = ops.d0 * ops.ds1;
    down_ = ops.ds2 * ops.d1;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(G);
  if (llt.info() != Eigen::Success) throw std::domain_error("Hodge splitting needs a definite pairing");
  const Eigen::MatrixXd L = llt.matrixL();
  const Eigen::MatrixXd Linv = L.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(dim, dim));
  Eigen::MatrixXd M = L.transpose() * box * Linv.transpose();
  M = 0.5 * (M + M.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double tol = 1e-8 * std::max(1.0, ev.cwiseAbs().maxCoeff());
  Eigen::VectorXd inv(dim), zero(dim);
  for (int i = 0; i < dim; ++i) {
    const bool z = std::abs(ev(i)) < tol;
    inv(i) = z ? 0.0 : 1.0 / ev(i);
    zero(i) = z ? 1.0 : 0.0;
  }
  const Eigen::MatrixXd& V = es.eigenvectors();
  pinv_ = Linv.transpose() * V * inv.asDiagonal() * V.transpose() * L.transpose();
  harm_ = Linv.transpose() * V * zero.asDiagonal() * V.transpose() * L.transpose();
}

HodgeParts Hodge::split(const Eigen::VectorXd& x) const {
  HodgeParts h;
  const Eigen::VectorXd y = pinv_ * x;
  h.harmonic = harm_ * x;
  h.im_partial = up_ * y;
  h.im_partial_star = down_ * y;
  return h;
}

Eigen::MatrixXd slot_embedding(const ChainSpace& sp, int slot) {
  const int cd = sp.cbasis().dim(), sd = sp.slot_dim(slot);
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(sp.dim(), cd * sd);
  for (int ci = 0; ci < cd; ++ci)
    for (int ai = 0; ai < sd; ++ai) E(sp.index(ci, slot, ai), ci * sd + ai) = 1.0;
  return E;
}

Eigen::MatrixXd hook_projector(const PointData& pd, int p, HookPart part) {
  const int n = pd.n;
  const auto& sp = ChainSpace::product(n, 1, p);
  auto alt = [&] {
    JetMatrix M = new_matrix(pd, sp, sp);
    build(M, sp, 0, sp, false, [&](const int* c, const int* a, Emit& e) {
      const double w = 1.0 / (p + 1);
      e(w, c, 0, a);
      for (int i = 0; i < p; ++i) {
        Tup t;
        t.add(a, p);
        t.v[i] = c[0];
        e(-w, Tup().add(a[i]), 0, t);
      }
    });
    return Eigen::MatrixXd(M.value());
  };
  auto trace = [&] {
    JetMatrix M = new_matrix(pd, sp, sp);
    if (p == 0) return Eigen::MatrixXd(M.value());
    const double coef = static_cast<double>(p) / (n - p + 1);
    build(M, sp, 0, sp, true, [&](const int* c, const int* a, Emit& e) {
      for (int q = 0; q < n; ++q)
        for (int r = 0; r < n; ++r) e(pd.g(c[0], a[0]), pd.gi(q, r), coef, Tup().add(q), 0, Tup().add(r).add(a + 1, p - 1));
    });
    return Eigen::MatrixXd(M.value());
  };
  switch (part) {
    case HookPart::Alt: return alt();
    case HookPart::Trace: return trace();
    default: return Eigen::MatrixXd::Identity(sp.dim(), sp.dim()) - alt() - trace();
  }
}

namespace {

// G-orthogonal projector onto ker(C)
Eigen::MatrixXd kernel_projector(const Eigen::MatrixXd& C, const Eigen::MatrixXd& G) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(C);
  lu.setThreshold(1e-10);
  const Eigen::MatrixXd K = lu.kernel();
  if (K.cols() == 0 || (K.cols() == 1 && K.norm() == 0.0)) return Eigen::MatrixXd::Zero(C.cols(), C.cols());
  const Eigen::MatrixXd KtG = K.transpose() * G;
  return K * (KtG * K).ldlt().solve(KtG);
}

Eigen::MatrixXd stack(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd s(a.rows() + b.rows(), a.cols());
  s << a, b;
  return s;
}

}  // namespace

Eigen::MatrixXd project_H1_matrix(const PointData& pd) {
  const int n = pd.n, k = pd.k;
  const auto& in = ChainSpace::product(n, 1, k);
  const auto& alt_out = ChainSpace::product(n, 0, k + 1);
  const auto& tr_out = ChainSpace::product(n, 0, k - 1);
  JetMatrix M1 = new_matrix(pd, alt_out, in);
  build(M1, alt_out, 0, in, true, [&](const int*, const int* b, Emit& e) { e(1.0, Tup().add(b[0]), 0, b + 1); });
  JetMatrix M2 = new_matrix(pd, tr_out, in);
  build(M2, tr_out, 0, in, false, [&](const int*, const int* a, Emit& e) {
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r) e(pd.gi(q, r), 1.0, Tup().add(q), 0, Tup().add(r).add(a, k - 1));
  });
  return kernel_projector(stack(M1.value(), M2.value()), gram_matrix(inverse_metric(pd), in));
}

Eigen::MatrixXd project_H2_matrix(const PointData& pd) {
  const int n = pd.n, k = pd.k;
  if (k < 2) throw std::invalid_argument("H2 projection needs k >= 2");
  const auto& in = ChainSpace::product(n, 2, k);
  const auto& alt_out = ChainSpace::product(n, 1, k + 1);
  const auto& tr_out = ChainSpace::product(n, 1, k - 1);
  JetMatrix M1 = new_matrix(pd, alt_out, in);
  build(M1, alt_out, 0, in, true,
        [&](const int* c, const int* b, Emit& e) { e(1.0, Tup().add(c[0]).add(b[0]), 0, b + 1); });
  JetMatrix M2 = new_matrix(pd, tr_out, in);
  build(M2, tr_out, 0, in, false, [&](const int* c, const int* a, Emit& e) {
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r) e(pd.gi(q, r), 1.0, Tup().add(q).add(c[0]), 0, Tup().add(r).add(a, k - 1));
  });
  return kernel_projector(stack(M1.value(), M2.value()), gram_matrix(inverse_metric(pd), in));
}

Eigen::MatrixXd tau_embed_matrix(const PointData& pd) {
  const int n = pd.n, k = pd.k;
  const auto& in = ChainSpace::product(n, 0, k);
  const auto& out = ChainSpace::get(n, k, 1);
  JetMatrix M = new_matrix(pd, out, in);
  build(M, out, kPhi, in, true,
        [&](const int* c, const int* a, Emit& e) { e(pd.g(c[0], a[0]), -static_cast<double>(k) * (k + 1), none, 0, a + 1); });
  build(M, out, kMu, in, false,
        [&](const int* c, const int* a, Emit& e) { e(static_cast<double>(n - k), none, 0, Tup().add(c[0]).add(a, k - 1)); });
  return M.value();
}

std::vector<KostantEntry> kostant_spectrum(const PointData& pd, const KostantOps& ops, std::uint64_t seed) {
  const long long n = pd.n, k = pd.k;
  std::mt19937_64 rng(seed);
  std::vector<KostantEntry> out;
  const auto& T0 = ChainSpace::get(pd.n, pd.k, 0);
  const auto& T1 = ChainSpace::get(pd.n, pd.k, 1);
  auto probe = [&](const std::string& name, Rational expected, const Eigen::MatrixXd& box, const Eigen::MatrixXd& G,
                   const Eigen::VectorXd& u) {
    KostantEntry e;
    e.name = name;
    e.expected = expected;
    const Eigen::VectorXd bu = box * u;
    e.observed = u.dot(G * bu) / u.dot(G * u);
    e.residual = (bu - e.observed * u).norm() / u.norm();
    out.push_back(e);
  };
  const Eigen::MatrixXd b0 = ops.box(0), b1 = ops.box(1);
  const char* names[4] = {"sigma", "phi", "mu", "rho"};
  const Rational c0[4] = {Rational(0), Rational(k + 1), Rational(n - k + 1), Rational(n)};
  for (int s = 0; s < 4; ++s) {
    const Eigen::MatrixXd E = slot_embedding(T0, s);
    probe(std::string("c0.") + names[s], c0[s], b0, ops.G0, E * random_vector(static_cast<int>(E.cols()), rng));
  }
  auto hook = [&](const std::string& name, Rational expected, int slot, HookPart part) {
    const Eigen::MatrixXd E = slot_embedding(T1, slot);
    const Eigen::MatrixXd P = hook_projector(pd, T1.slot_degree(slot), part);
    probe(name, expected, b1, ops.G1, E * (P * random_vector(static_cast<int>(P.cols()), rng)));
  };
  hook("c1.top.alt", Rational(2 * (n + k - 1)), kRho, HookPart::Alt);
  hook("c1.top.zero", Rational(2 * (n - 2)), kRho, HookPart::Zero);
  hook("c1.top.trace", Rational(2 * (2 * n - k - 1)), kRho, HookPart::Trace);
  hook("c1.midleft.alt", Rational(4 * (k + 1)), kPhi, HookPart::Alt);
  hook("c1.midleft.zero", Rational(2 * k), kPhi, HookPart::Zero);
  const Eigen::MatrixXd tau = tau_embed_matrix(pd);
  probe("c1.midleft.tau", Rational(2 * n), b1, ops.G1, tau * random_vector(static_cast<int>(tau.cols()), rng));
  if (k >= 2) {
    hook("c1.midright.zero", Rational(2 * (n - k)), kMu, HookPart::Zero);
    hook("c1.midright.trace", Rational(2 * (n - k - 1)), kMu, HookPart::Trace);
  }
  hook("c1.bottom.zero", Rational(0), kSigma, HookPart::Zero);
  return out;
}

// ---------------------------------------------------------------------------

JetMatrix sigma_section(const ChainSpace& T0, const JetMatrix& sigma) {
  JetMatrix s(T0.dim(), 1, sigma.table(), sigma.order());
  s.set_rows_block(T0.slot_offset(kSigma), sigma);
  return s;
}

Eigen::VectorXd box0_inverse_scalars(int n, int k) {
  const auto& T0 = ChainSpace::get(n, k, 0);
  Eigen::VectorXd d = Eigen::VectorXd::Zero(T0.dim());
  const double inv[4] = {0.0, 1.0 / (k + 1), 1.0 / (n - k + 1), 1.0 / n};
  for (int s = 0; s < 4; ++s) d.segment(T0.slot_offset(s), T0.slot_dim(s)).setConstant(inv[s]);
  return d;
}

JetMatrix split_L0(const PointData& pd, const JetMatrix& sigma) {
  if (sigma.order() < 2 || pd.order < sigma.order() - 1)
    throw std::invalid_argument("split_L0: sigma needs two jet orders and matching connection data");
  const auto& T0 = ChainSpace::get(pd.n, pd.k, 0);
  const JetMatrix A = connection_matrix(pd);
  const JetMatrix ds = partial_star_matrix(pd, 1);
  const Eigen::MatrixXd binv = box0_inverse_scalars(pd.n, pd.k).asDiagonal();
  JetMatrix s = sigma_section(T0, sigma);
  for (int step = 0; step < 2; ++step) {
    const JetMatrix y = ds * covariant_derivative(A, s);
    s = s.truncated(y.order()) - binv * y;
  }
  return s;
}

JetMatrix form_covariant_derivative(const PointData& pd, const JetMatrix& sigma) {
  const int n = pd.n, k = pd.k;
  const auto& in = ChainSpace::product(n, 0, k);
  const auto& out = ChainSpace::product(n, 1, k);
  JetMatrix Gm = new_matrix(pd, out, in);
  build(Gm, out, 0, in, false, [&](const int* c, const int* a, Emit& e) {
    for (int i = 0; i < k; ++i) {
      Tup t;
      t.add(a, k);
      for (int q = 0; q < n; ++q) {
        t.v[i] = q;
        e(pd.Gamma(q, c[0], a[i]), -1.0, none, 0, t);
      }
    }
  });
  return covariant_derivative(Gm, sigma);
}

Theta0Result theta0(const PointData& pd, const JetMatrix& sigma) {
  Theta0Result r;
  r.L0 = split_L0(pd, sigma);
  const JetMatrix A = connection_matrix(pd);
  r.nabla_L0 = covariant_derivative(A, r.L0).value();
  const auto& T1 = ChainSpace::get(pd.n, pd.k, 1);
  const Eigen::VectorXd bottom = slot_embedding(T1, kSigma).transpose() * r.nabla_L0;
  r.theta = project_H1_matrix(pd) * bottom;
  return r;
}

}  // namespace ckp
