#pragma once
// Dense weighted tensors: index variance, antisymmetric blocks and conformal weight.
// Components are row-major with extent n per index. Brackets are normalized
// (averaged over permutations).

#include <cmath>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "ckp/jet.hpp"

namespace ckp {

inline constexpr int kMaxDim = 8;
inline constexpr int kMaxRank = 6;

enum class Variance { Covariant, Contravariant };

struct IndexSpec {
  std::vector<Variance> positions;
  std::vector<std::vector<int>> antisym_blocks;
  int weight = 0;

  static IndexSpec covariant(int rank, int weight = 0) {
    return {std::vector<Variance>(rank, Variance::Covariant), {}, weight};
  }
  int rank() const { return static_cast<int>(positions.size()); }
  void validate() const;
};

struct Permutation {
  std::vector<int> p;
  int sign;
};
// all permutations of r elements with signs, cached
const std::vector<Permutation>& permutations(int r);
long long factorial(int r);

template <class S>
class BasicTensor {
 public:
  BasicTensor() = default;
  BasicTensor(int n, IndexSpec spec) : n_(n), spec_(std::move(spec)) {
    if (n < 1 || n > kMaxDim) throw std::invalid_argument("tensor: dimension out of range");
    if (spec_.rank() > kMaxRank) throw std::invalid_argument("tensor: rank exceeds 6");
    spec_.validate();
    std::size_t sz = 1;
    for (int i = 0; i < spec_.rank(); ++i) sz *= n;
    data_.assign(sz, S(0.0));
  }
  BasicTensor(int n, int rank, int weight = 0) : BasicTensor(n, IndexSpec::covariant(rank, weight)) {}

  int dim() const { return n_; }
  int rank() const { return spec_.rank(); }
  const IndexSpec& spec() const { return spec_; }
  IndexSpec& spec() { return spec_; }
  std::size_t size() const { return data_.size(); }
  S& operator[](std::size_t i) { return data_[i]; }
  const S& operator[](std::size_t i) const { return data_[i]; }
  std::vector<S>& data() { return data_; }
  const std::vector<S>& data() const { return data_; }

  std::size_t offset(const int* idx) const {
    std::size_t o = 0;
    for (int i = 0; i < rank(); ++i) o = o * n_ + idx[i];
    return o;
  }
  void unravel(std::size_t o, int* idx) const {
    for (int i = rank() - 1; i >= 0; --i) {
      idx[i] = static_cast<int>(o % n_);
      o /= n_;
    }
  }
  template <class... I>
  S& operator()(I... i) {
    const int idx[] = {static_cast<int>(i)...};
    return data_[offset(idx)];
  }
  template <class... I>
  const S& operator()(I... i) const {
    const int idx[] = {static_cast<int>(i)...};
    return data_[offset(idx)];
  }

  BasicTensor& operator+=(const BasicTensor& o) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  BasicTensor& operator-=(const BasicTensor& o) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  BasicTensor& operator*=(double s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

 private:
  int n_ = 0;
  IndexSpec spec_;
  std::vector<S> data_;
};

using Tensor = BasicTensor<double>;
using JetTensor = BasicTensor<Jet>;

// a tensor field: point -> components, with a fixed index structure
struct WeightedTensorField {
  IndexSpec spec;
  std::function<Tensor(const std::vector<double>&)> eval;
};

Tensor values(const JetTensor& t);
double max_abs(const Tensor& t);
double frobenius(const Tensor& t);

namespace detail {
inline void check_positions(int rank, const std::vector<int>& pos) {
  if (pos.empty()) throw std::invalid_argument("tensor: empty position list");
  std::vector<bool> seen(rank, false);
  for (int p : pos) {
    if (p < 0 || p >= rank || seen[p]) throw std::invalid_argument("tensor: invalid position list");
    seen[p] = true;
  }
}

template <class S>
BasicTensor<S> project(const BasicTensor<S>& t, const std::vector<int>& pos, bool signed_avg) {
  detail::check_positions(t.rank(), pos);
  BasicTensor<S> out(t.dim(), t.spec());
  const auto& perms = permutations(static_cast<int>(pos.size()));
  const double inv = 1.0 / static_cast<double>(perms.size());
  int idx[kMaxRank], src[kMaxRank];
  for (std::size_t o = 0; o < t.size(); ++o) {
    t.unravel(o, idx);
    S acc(0.0);
    for (const auto& pm : perms) {
      for (int i = 0; i < t.rank(); ++i) src[i] = idx[i];
      for (std::size_t i = 0; i < pos.size(); ++i) src[pos[i]] = idx[pos[pm.p[i]]];
      const double s = signed_avg ? pm.sign * inv : inv;
      acc += t[t.offset(src)] * s;
    }
    out[o] = acc;
  }
  return out;
}
}  // namespace detail

template <class S>
BasicTensor<S> symmetrize(const BasicTensor<S>& t, const std::vector<int>& positions) {
  auto out = detail::project(t, positions, false);
  // a symmetrized block is no longer antisymmetric
  auto& blocks = out.spec().antisym_blocks;
  std::erase_if(blocks, [&](const std::vector<int>& b) {
    int hit = 0;
    for (int p : b)
      for (int q : positions) hit += (p == q);
    return hit >= 2;
  });
  return out;
}

template <class S>
BasicTensor<S> antisymmetrize(const BasicTensor<S>& t, const std::vector<int>& positions) {
  return detail::project(t, positions, true);
}

// contract positions p1, p2 with metric m (rank 2) or, if m is null, plainly.
// metric weight: g^{ab} carries -2, g_{ab} carries +2, plain pairing 0.
template <class S>
BasicTensor<S> trace(const BasicTensor<S>& t, int p1, int p2, const BasicTensor<S>* m = nullptr) {
  if (p1 == p2) throw std::invalid_argument("tensor: trace over a single position");
  if (p1 < 0 || p2 < 0 || p1 >= t.rank() || p2 >= t.rank())
    throw std::invalid_argument("tensor: trace position out of range");
  if (p1 > p2) std::swap(p1, p2);
  IndexSpec spec;
  for (int i = 0; i < t.rank(); ++i)
    if (i != p1 && i != p2) spec.positions.push_back(t.spec().positions[i]);
  spec.weight = t.spec().weight;
  if (m) {
    spec.weight += m->spec().positions[0] == Variance::Contravariant ? -2 : 2;
  } else if (t.spec().positions[p1] == t.spec().positions[p2]) {
    throw std::invalid_argument("tensor: plain trace needs mixed variance");
  }
  // surviving antisymmetric blocks, renumbered
  for (const auto& b : t.spec().antisym_blocks) {
    std::vector<int> nb;
    for (int p : b) {
      if (p == p1 || p == p2) continue;
      nb.push_back(p - (p > p1) - (p > p2));
    }
    if (nb.size() >= 2) spec.antisym_blocks.push_back(nb);
  }
  BasicTensor<S> out(t.dim(), spec);
  const int n = t.dim();
  int idx[kMaxRank], full[kMaxRank];
  for (std::size_t o = 0; o < out.size(); ++o) {
    out.unravel(o, idx);
    for (int i = 0, j = 0; i < t.rank(); ++i)
      if (i != p1 && i != p2) full[i] = idx[j++];
    S acc(0.0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (!m && a != b) continue;
        full[p1] = a;
        full[p2] = b;
        if (m) acc += (*m)(a, b) * t[t.offset(full)];
        else acc += t[t.offset(full)];
      }
    out[o] = acc;
  }
  return out;
}

// raise (with ginv) or lower (with g) the index at position; flips variance, shifts weight
template <class S>
BasicTensor<S> raise_lower(const BasicTensor<S>& t, int position, const BasicTensor<S>& g,
                           const BasicTensor<S>& ginv) {
  if (position < 0 || position >= t.rank()) throw std::invalid_argument("tensor: bad position");
  IndexSpec spec = t.spec();
  const bool raising = spec.positions[position] == Variance::Covariant;
  const BasicTensor<S>& m = raising ? ginv : g;
  spec.positions[position] = raising ? Variance::Contravariant : Variance::Covariant;
  spec.weight += raising ? -2 : 2;
  BasicTensor<S> out(t.dim(), spec);
  int idx[kMaxRank], src[kMaxRank];
  for (std::size_t o = 0; o < out.size(); ++o) {
    out.unravel(o, idx);
    for (int i = 0; i < t.rank(); ++i) src[i] = idx[i];
    S acc(0.0);
    for (int b = 0; b < t.dim(); ++b) {
      src[position] = b;
      acc += m(idx[position], b) * t[t.offset(src)];
    }
    out[o] = acc;
  }
  return out;
}

// largest deviation from exact antisymmetry over the declared blocks
double antisymmetry_residual(const Tensor& t);

}  // namespace ckp
