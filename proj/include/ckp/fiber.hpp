#pragma once
// Geometric data at one chart point, truncated to a common jet order, and the
// generic builder that turns an index formula into a matrix between chain spaces.
//
// A formula is written for one output component with its c-indices sorted and its
// a-indices in some order; the builder alternates over the a-block (normalized)
// when asked to. Inputs are addressed by arbitrary index tuples and looked up
// with the sign of the sorting permutation.

#include <stdexcept>
#include <vector>

#include "ckp/curvature.hpp"
#include "ckp/forms.hpp"
#include "ckp/linmap.hpp"
#include "ckp/tensor.hpp"

namespace ckp {

struct PointData {
  int n = 0, k = 0;
  int order = 0;  // jet order of every matrix built from this data
  const MonomialTable* tab = nullptr;
  bool has_dc = false;  // A and DC available at this order
  JetTensor g, gi, P, Gamma, C, A, DC;
  // raised variants
  JetTensor Pup;    // (c, p) = P_c^p
  JetTensor Cuu;    // (a, b, p, q) = C_ab^{pq}
  JetTensor C3u;    // (a, b, c, p) = C_abc^p
  JetTensor Ccp;    // (c, p, a, b) = C_c^p_ab
  JetTensor Aup;    // (p, a, b) = A^p_ab
  JetTensor Aabp;   // (a, b, p) = A_ab^p
  JetTensor Auu;    // (a, p, q) = A_a^{pq}
  JetTensor DCuu;   // (u, a, b, p, q) = D_u C_ab^{pq}
  JetTensor DuC;    // (p, c, q, a, b) = D^p C_c^q_ab
  // rescale data (zero unless set_rescale was called)
  std::vector<Jet> U, Uu;
  Jet U2;

  void set_rescale(const std::vector<Jet>& upsilon);
};

// order 0 gives plain values; higher orders need enough metric jets
PointData point_data(const CurvaturePack& pack, int k, int order = 0);

// emission target for one output row
class Emit {
 public:
  Emit(JetMatrix& m, const ChainSpace& in, int row, double w) : m_(m), in_(in), row_(row), w_(w) {}
  void operator()(double s, const int* cin, int islot, const int* ain) { put(nullptr, nullptr, s, cin, islot, ain); }
  void operator()(const Jet& a, double s, const int* cin, int islot, const int* ain) {
    put(&a, nullptr, s, cin, islot, ain);
  }
  void operator()(const Jet& a, const Jet& b, double s, const int* cin, int islot, const int* ain) {
    put(&a, &b, s, cin, islot, ain);
  }

 private:
  void put(const Jet* a, const Jet* b, double s, const int* cin, int islot, const int* ain) {
    int sc = 1, sa = 1, ci = 0;
    if (in_.level() > 0) {
      ci = in_.cbasis().lookup(cin, &sc);
      if (ci < 0) return;
    }
    const int ai = in_.slot_basis(islot).lookup(ain, &sa);
    if (ai < 0) return;
    const int col = in_.index(ci, islot, ai);
    const double f = s * w_ * sc * sa;
    if (!a) {
      m_.add(row_, col, Jet(1.0), f);
    } else if (!b) {
      m_.add(row_, col, *a, f);
    } else if (m_.terms() == 1) {
      m_.add(row_, col, Jet(a->value() * b->value()), f);
    } else {
      m_.add(row_, col, *a * *b, f);
    }
  }
  JetMatrix& m_;
  const ChainSpace& in_;
  int row_;
  double w_;
};

// raw(c, a, emit): c = sorted output c-tuple, a = output a-tuple (permuted when
// alternating); contributions accumulate into M rows of (out, oslot).
template <class Raw>
void build(JetMatrix& M, const ChainSpace& out, int oslot, const ChainSpace& in, bool alternate, Raw&& raw,
           double scale = 1.0) {
  const FormBasis& cb = out.cbasis();
  const FormBasis& ab = out.slot_basis(oslot);
  const int p = ab.degree();
  const auto& perms = permutations(alternate ? p : 0);
  const double w = scale / static_cast<double>(perms.size());
  int c[8] = {}, a[8] = {};
  for (int ci = 0; ci < cb.dim(); ++ci) {
    for (int i = 0; i < out.level(); ++i) c[i] = cb.tuple(ci)[i];
    for (int ai = 0; ai < ab.dim(); ++ai) {
      for (const auto& pm : perms) {
        for (int i = 0; i < p; ++i) a[i] = ab.tuple(ai)[alternate ? pm.p[i] : i];
        Emit es(M, in, out.index(ci, oslot, ai), w * pm.sign);
        raw(static_cast<const int*>(c), static_cast<const int*>(a), es);
      }
    }
  }
}

inline JetMatrix new_matrix(const PointData& pd, const ChainSpace& out, const ChainSpace& in) {
  return JetMatrix(out.dim(), in.dim(), pd.tab, pd.order);
}

// small index-tuple helpers
struct Tup {
  int v[8];
  int len = 0;
  Tup() = default;
  Tup& add(int x) {
    v[len++] = x;
    return *this;
  }
  Tup& add(const int* p, int count) {
    for (int i = 0; i < count; ++i) v[len++] = p[i];
    return *this;
  }
  operator const int*() const { return v; }
};

}  // namespace ckp
