#include "ckp/forms.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace ckp {

long long binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  long long b = 1;
  for (int i = 1; i <= r; ++i) b = b * (n - r + i) / i;
  return b;
}

FormBasis::FormBasis(int n, int p) : n_(n), p_(p) {
  if (p < 0 || p > n) throw std::invalid_argument("form basis: degree out of range");
  binom_.assign(n + 1, std::vector<int>(p + 2, 0));
  for (int i = 0; i <= n; ++i)
    for (int r = 0; r <= p + 1; ++r) binom_[i][r] = static_cast<int>(binomial(i, r));
  // colex enumeration: increasing tuples ordered by their largest entry first
  std::vector<int> cur(p);
  for (int i = 0; i < p; ++i) cur[i] = i;
  for (;;) {
    IndexTuple t{};
    for (int i = 0; i < p; ++i) t[i] = static_cast<std::int8_t>(cur[i]);
    tuples_.push_back(t);
    int i = 0;
    while (i < p && (i + 1 == p ? cur[i] + 1 >= n : cur[i] + 1 >= cur[i + 1])) ++i;
    if (i >= p) break;
    ++cur[i];
    for (int j = 0; j < i; ++j) cur[j] = j;
  }
}

int FormBasis::rank_sorted(const int* idx) const {
  int r = 0;
  for (int i = 0; i < p_; ++i) r += binom_[idx[i]][i + 1];
  return r;
}

int FormBasis::lookup(const int* idx, int* sign) const {
  int tmp[8];
  for (int i = 0; i < p_; ++i) tmp[i] = idx[i];
  int s = 1;
  for (int i = 1; i < p_; ++i) {
    int v = tmp[i], j = i - 1;
    while (j >= 0 && tmp[j] > v) {
      tmp[j + 1] = tmp[j];
      --j;
      s = -s;
    }
    tmp[j + 1] = v;
  }
  for (int i = 1; i < p_; ++i)
    if (tmp[i] == tmp[i - 1]) return -1;
  *sign = s;
  return rank_sorted(tmp);
}

const FormBasis& FormBasis::get(int n, int p) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<FormBasis>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, p}];
  if (!slot) slot.reset(new FormBasis(n, p));
  return *slot;
}

ChainSpace::ChainSpace(int n, int k, int l, const std::vector<int>& degrees) : n_(n), k_(k), l_(l) {
  cb_ = &FormBasis::get(n, l);
  off_.push_back(0);
  for (int d : degrees) {
    fs_.push_back(&FormBasis::get(n, d));
    off_.push_back(off_.back() + fs_.back()->dim());
  }
}

const ChainSpace& ChainSpace::get(int n, int k, int level) {
  if (k < 1 || k > n - 1) throw std::invalid_argument("chain space: k out of range");
  static std::mutex mu;
  static std::map<std::array<int, 3>, std::unique_ptr<ChainSpace>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, k, level}];
  if (!slot) slot.reset(new ChainSpace(n, k, level, {k, k + 1, k - 1, k}));
  return *slot;
}

const ChainSpace& ChainSpace::product(int n, int level, int p) {
  static std::mutex mu;
  static std::map<std::array<int, 3>, std::unique_ptr<ChainSpace>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, level, p}];
  if (!slot) slot.reset(new ChainSpace(n, -1, level, {p}));
  return *slot;
}

int ChainSpace::slot_of(int i) const {
  int r = i % off_.back();
  int s = 0;
  while (r >= off_[s + 1]) ++s;
  return s;
}

double slot_weight(int k, int slot) {
  switch (slot) {
    case kSigma: return 1.0;
    case kPhi: return 1.0 / (k + 1);
    case kMu: return k;
    default: return 1.0;
  }
}

}  // namespace ckp
