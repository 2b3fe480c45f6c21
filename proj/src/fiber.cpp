#include "ckp/fiber.hpp"

namespace ckp {

namespace {

bool truncate_into(const JetTensor& src, JetTensor& dst, int order) {
  dst = src;
  for (auto& j : dst.data()) {
    if (!j.is_constant() && j.order() < order) return false;
    j = j.truncated(order);
  }
  return true;
}

}  // namespace

PointData point_data(const CurvaturePack& pack, int k, int order) {
  PointData d;
  d.n = pack.n;
  d.k = k;
  d.order = order;
  d.tab = &MonomialTable::get(pack.n, order);
  const int n = d.n;
  if (!truncate_into(pack.g, d.g, order) || !truncate_into(pack.ginv, d.gi, order) ||
      !truncate_into(pack.P, d.P, order) || !truncate_into(pack.Gamma, d.Gamma, order) ||
      !truncate_into(pack.C, d.C, order))
    throw std::invalid_argument("insufficient jet order for connection data");
  d.has_dc = truncate_into(pack.A, d.A, order) && truncate_into(pack.DC, d.DC, order);

  auto raise_last = [&](const JetTensor& t) {
    JetTensor out(n, t.rank());
    int idx[kMaxRank], src[kMaxRank];
    const int r = t.rank();
    for (std::size_t o = 0; o < out.size(); ++o) {
      out.unravel(o, idx);
      for (int i = 0; i < r; ++i) src[i] = idx[i];
      Jet acc(0.0);
      for (int q = 0; q < n; ++q) {
        src[r - 1] = q;
        Jet::fma(acc, t[t.offset(src)], d.gi(q, idx[r - 1]));
      }
      out[o] = acc;
    }
    return out;
  };
  d.Pup = raise_last(d.P);
  d.C3u = raise_last(d.C);
  // C_ab^{pq}: raise the last two
  {
    JetTensor t(n, 4);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int i = 0; i < n; ++i)
          for (int q = 0; q < n; ++q) {
            Jet acc(0.0);
            for (int j = 0; j < n; ++j) Jet::fma(acc, d.C(a, b, i, j), d.gi(j, q));
            t(a, b, i, q) = acc;
          }
    d.Cuu = JetTensor(n, 4);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n; ++q) {
            Jet acc(0.0);
            for (int i = 0; i < n; ++i) Jet::fma(acc, d.gi(p, i), t(a, b, i, q));
            d.Cuu(a, b, p, q) = acc;
          }
  }
  d.Ccp = JetTensor(n, 4);
  for (int c = 0; c < n; ++c)
    for (int p = 0; p < n; ++p)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          Jet acc(0.0);
          for (int q = 0; q < n; ++q) Jet::fma(acc, d.C(c, q, a, b), d.gi(q, p));
          d.Ccp(c, p, a, b) = acc;
        }
  if (d.has_dc) {
    d.Aup = JetTensor(n, 3);
    for (int p = 0; p < n; ++p)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          Jet acc(0.0);
          for (int q = 0; q < n; ++q) Jet::fma(acc, d.gi(p, q), d.A(q, a, b));
          d.Aup(p, a, b) = acc;
        }
    d.Aabp = raise_last(d.A);
    d.Auu = JetTensor(n, 3);
    for (int a = 0; a < n; ++a)
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
          Jet acc(0.0);
          for (int i = 0; i < n; ++i) Jet::fma(acc, d.gi(p, i), d.Aabp(a, i, q));
          d.Auu(a, p, q) = acc;
        }
    // D_u C_ab^{pq}
    JetTensor t(n, 5);
    int idx[5];
    for (std::size_t o = 0; o < t.size(); ++o) {
      t.unravel(o, idx);  // u a b i q : D_u C_abi^q
      Jet acc(0.0);
      for (int j = 0; j < n; ++j) Jet::fma(acc, d.DC(idx[0], idx[1], idx[2], idx[3], j), d.gi(j, idx[4]));
      t[o] = acc;
    }
    d.DCuu = JetTensor(n, 5);
    for (std::size_t o = 0; o < t.size(); ++o) {
      d.DCuu.unravel(o, idx);  // u a b p q
      Jet acc(0.0);
      for (int i = 0; i < n; ++i) Jet::fma(acc, d.gi(idx[3], i), t(idx[0], idx[1], idx[2], i, idx[4]));
      d.DCuu[o] = acc;
    }
    // D^p C_c^q_ab : (p, c, q, a, b)
    JetTensor s(n, 5);  // (u, c, q, a, b) = D_u C_c^q_ab
    for (std::size_t o = 0; o < s.size(); ++o) {
      s.unravel(o, idx);
      Jet acc(0.0);
      for (int j = 0; j < n; ++j) Jet::fma(acc, d.gi(idx[2], j), d.DC(idx[0], idx[1], j, idx[3], idx[4]));
      s[o] = acc;
    }
    d.DuC = JetTensor(n, 5);
    for (std::size_t o = 0; o < s.size(); ++o) {
      d.DuC.unravel(o, idx);
      Jet acc(0.0);
      for (int u = 0; u < n; ++u) Jet::fma(acc, d.gi(idx[0], u), s(u, idx[1], idx[2], idx[3], idx[4]));
      d.DuC[o] = acc;
    }
  }
  d.U.assign(n, Jet(0.0));
  d.Uu.assign(n, Jet(0.0));
  d.U2 = Jet(0.0);
  return d;
}

void PointData::set_rescale(const std::vector<Jet>& upsilon) {
  U.clear();
  for (const auto& u : upsilon) U.push_back(u.truncated(order));
  Uu.assign(n, Jet(0.0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) Jet::fma(Uu[a], gi(a, b), U[b]);
  U2 = Jet(0.0);
  for (int a = 0; a < n; ++a) Jet::fma(U2, U[a], Uu[a]);
}

}  // namespace ckp
