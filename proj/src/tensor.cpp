#include "ckp/tensor.hpp"

#include <algorithm>
#include <array>
#include <mutex>
#include <numeric>

namespace ckp {

void IndexSpec::validate() const {
  std::vector<bool> used(positions.size(), false);
  for (const auto& b : antisym_blocks) {
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (b[i] < 0 || b[i] >= rank()) throw std::invalid_argument("index spec: block position out of range");
      if (i > 0 && b[i] <= b[i - 1]) throw std::invalid_argument("index spec: block not increasing");
      if (used[b[i]]) throw std::invalid_argument("index spec: overlapping blocks");
      used[b[i]] = true;
    }
  }
}

long long factorial(int r) {
  long long f = 1;
  for (int i = 2; i <= r; ++i) f *= i;
  return f;
}

const std::vector<Permutation>& permutations(int r) {
  static std::array<std::vector<Permutation>, kMaxRank + 2> cache;
  static std::once_flag once;
  std::call_once(once, [] {
    for (int m = 0; m <= kMaxRank + 1; ++m) {
      std::vector<int> p(m);
      std::iota(p.begin(), p.end(), 0);
      do {
        int inv = 0;
        for (int i = 0; i < m; ++i)
          for (int j = i + 1; j < m; ++j) inv += p[i] > p[j];
        cache[m].push_back({p, inv % 2 ? -1 : 1});
      } while (std::next_permutation(p.begin(), p.end()));
    }
  });
  if (r < 0 || r > kMaxRank + 1) throw std::invalid_argument("permutations: size out of range");
  return cache[r];
}

Tensor values(const JetTensor& t) {
  Tensor out(t.dim(), t.spec());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = t[i].value();
  return out;
}

double max_abs(const Tensor& t) {
  double m = 0.0;
  for (double v : t.data()) m = std::max(m, std::abs(v));
  return m;
}

double frobenius(const Tensor& t) {
  double s = 0.0;
  for (double v : t.data()) s += v * v;
  return std::sqrt(s);
}

double antisymmetry_residual(const Tensor& t) {
  double worst = 0.0;
  for (const auto& b : t.spec().antisym_blocks) {
    Tensor d = antisymmetrize(t, b);
    d -= t;
    worst = std::max(worst, max_abs(d));
  }
  return worst;
}

}  // namespace ckp
