#include "ckp/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace ckp {

namespace {

// all exponent vectors of total degree d in n variables, lexicographically descending,
// so that degree one comes out as e_0, e_1, ...
void enumerate(int n, int d, int var, std::array<std::uint8_t, 8>& cur,
               std::vector<std::array<std::uint8_t, 8>>& out) {
  if (var == n - 1) {
    cur[var] = static_cast<std::uint8_t>(d);
    out.push_back(cur);
    cur[var] = 0;
    return;
  }
  for (int e = d; e >= 0; --e) {
    cur[var] = static_cast<std::uint8_t>(e);
    enumerate(n, d - e, var + 1, cur, out);
  }
  cur[var] = 0;
}

}  // namespace

MonomialTable::MonomialTable(int n) : n_(n), order_(kMaxOrder) {
  if (n < 1 || n > 8) throw std::invalid_argument("jet: dimension must be in 1..8");
  start_.push_back(0);
  for (int d = 0; d <= order_; ++d) {
    std::array<std::uint8_t, 8> cur{};
    enumerate(n, d, 0, cur, expo_);
    start_.push_back(static_cast<int>(expo_.size()));
  }
  const int s = size();
  deg_.resize(s);
  for (int m = 0; m < s; ++m) {
    int d = 0;
    for (int v = 0; v < n; ++v) d += expo_[m][v];
    deg_[m] = d;
  }
  prod_.assign(static_cast<std::size_t>(s) * s, -1);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) {
      if (deg_[i] + deg_[j] > order_) continue;
      std::array<std::uint8_t, 8> e{};
      for (int v = 0; v < n; ++v) e[v] = expo_[i][v] + expo_[j][v];
      prod_[static_cast<std::size_t>(i) * s + j] = index(e);
    }
  raise_.assign(static_cast<std::size_t>(s) * n, -1);
  for (int m = 0; m < s; ++m) {
    if (deg_[m] == order_) continue;
    for (int v = 0; v < n; ++v) {
      auto e = expo_[m];
      e[v]++;
      raise_[static_cast<std::size_t>(m) * n + v] = index(e);
    }
  }
}

int MonomialTable::index(const std::array<std::uint8_t, 8>& e) const {
  int d = 0;
  for (int v = 0; v < n_; ++v) d += e[v];
  if (d > order_) return -1;
  // binary search inside the degree block (lexicographically descending)
  auto first = expo_.begin() + start_[d], last = expo_.begin() + start_[d + 1];
  auto it = std::lower_bound(first, last, e, [this](const auto& a, const auto& b) {
    for (int v = 0; v < n_; ++v)
      if (a[v] != b[v]) return a[v] > b[v];
    return false;
  });
  return static_cast<int>(it - expo_.begin());
}

const MonomialTable& MonomialTable::get(int n, int order) {
  if (order > kMaxOrder) throw std::invalid_argument("jet: order exceeds table limit");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<MonomialTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot.reset(new MonomialTable(n));
  return *slot;
}

// ---------------------------------------------------------------------------

Jet Jet::variable(const MonomialTable& t, int order, int var, double at) {
  Jet j = zero(t, order);
  j.c_[0] = at;
  if (order >= 1) j.c_[1 + var] = 1.0;
  return j;
}

Jet Jet::zero(const MonomialTable& t, int order) {
  if (order > t.max_order()) throw std::invalid_argument("jet: order exceeds table");
  Jet j;
  j.tab_ = &t;
  j.order_ = order;
  j.c_.assign(t.count(order), 0.0);
  return j;
}

void Jet::resize_to(const MonomialTable* t, int order) {
  tab_ = t;
  order_ = order;
  c_.resize(t ? t->count(order) : 1, 0.0);
}

double Jet::partial(int var) const { return coeff(1 + var); }

Jet Jet::derivative(int var) const {
  if (!tab_) return Jet(0.0);
  if (order_ == 0) throw std::domain_error("jet: derivative order exhausted");
  Jet r = zero(*tab_, order_ - 1);
  const int cnt = tab_->count(order_ - 1);
  for (int m = 0; m < cnt; ++m) {
    int up = tab_->raise(m, var);
    r.c_[m] = c_[up] * (tab_->exponents(m)[var] + 1);
  }
  return r;
}

Jet Jet::truncated(int order) const {
  if (!tab_ || order >= order_) return *this;
  Jet r = *this;
  r.order_ = order;
  r.c_.resize(tab_->count(order));
  return r;
}

Jet& Jet::operator+=(const Jet& o) {
  if (o.tab_) {
    if (!tab_) {
      double v = c_[0];
      *this = o;
      c_[0] += v;
      return *this;
    }
    if (o.order_ < order_) resize_to(tab_, o.order_);
    const int cnt = static_cast<int>(c_.size());
    for (int m = 0; m < cnt; ++m) c_[m] += o.c_[m];
  } else {
    c_[0] += o.c_[0];
  }
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  axpy(*this, o, -1.0);
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

Jet Jet::operator-() const {
  Jet r = *this;
  r *= -1.0;
  return r;
}

void Jet::axpy(Jet& acc, const Jet& a, double s) {
  if (a.tab_) {
    if (!acc.tab_) {
      double v = acc.c_[0];
      acc = a;
      acc *= s;
      acc.c_[0] += v;
      return;
    }
    if (a.order_ < acc.order_) acc.resize_to(acc.tab_, a.order_);
    const int cnt = static_cast<int>(acc.c_.size());
    for (int m = 0; m < cnt; ++m) acc.c_[m] += s * a.c_[m];
  } else {
    acc.c_[0] += s * a.c_[0];
  }
}

void Jet::fma(Jet& acc, const Jet& a, const Jet& b, double s) {
  if (!a.tab_) {
    axpy(acc, b, s * a.c_[0]);
    return;
  }
  if (!b.tab_) {
    axpy(acc, a, s * b.c_[0]);
    return;
  }
  const MonomialTable* t = a.tab_;
  int ord = std::min(a.order_, b.order_);
  if (!acc.tab_) {
    double v = acc.c_[0];
    acc = zero(*t, ord);
    acc.c_[0] = v;
  } else if (acc.order_ > ord) {
    acc.resize_to(t, ord);
  }
  ord = acc.order_;
  const int ca = t->count(ord);
  for (int i = 0; i < ca; ++i) {
    const double ai = a.c_[i];
    if (ai == 0.0) continue;
    const int cb = t->count(ord - t->degree(i));
    for (int j = 0; j < cb; ++j) acc.c_[t->product(i, j)] += s * ai * b.c_[j];
  }
}

Jet operator*(const Jet& a, const Jet& b) {
  if (!a.tab_) return b * a.c_[0];
  if (!b.tab_) return a * b.c_[0];
  Jet r = Jet::zero(*a.tab_, std::min(a.order_, b.order_));
  Jet::fma(r, a, b);
  return r;
}

Jet reciprocal(const Jet& a) {
  const double a0 = a.value();
  if (a0 == 0.0) throw std::domain_error("jet: reciprocal of zero");
  if (!a.tab_) return Jet(1.0 / a0);
  // 1/(a0 (1+h)) = (1/a0) sum (-h)^m, h nilpotent beyond the order
  Jet h = a * (1.0 / a0);
  h.c_[0] = 0.0;
  Jet sum(1.0), term(1.0);
  for (int m = 1; m <= a.order_; ++m) {
    term = term * h * -1.0;
    sum += term;
  }
  return sum * (1.0 / a0);
}

Jet operator/(const Jet& a, const Jet& b) {
  if (!b.tab_) return a * (1.0 / b.c_[0]);
  return a * reciprocal(b);
}

Jet exp(const Jet& a) {
  const double e0 = std::exp(a.value());
  if (!a.tab_) return Jet(e0);
  Jet h = a;
  h.c_[0] = 0.0;
  Jet sum(1.0), term(1.0);
  for (int m = 1; m <= a.order_; ++m) {
    term = term * h * (1.0 / m);
    sum += term;
  }
  return sum * e0;
}

namespace {
// sin h and cos h for nilpotent h
void sincos_nil(const Jet& h, int order, Jet& s, Jet& c) {
  s = Jet(0.0);
  c = Jet(1.0);
  Jet term(1.0);
  for (int m = 1; m <= order; ++m) {
    term = term * h * (1.0 / m);
    switch (m % 4) {
      case 1: s += term; break;
      case 2: c -= term; break;
      case 3: s -= term; break;
      default: c += term; break;
    }
  }
}
}  // namespace

Jet sin(const Jet& a) {
  const double a0 = a.value();
  if (!a.tab_) return Jet(std::sin(a0));
  Jet h = a;
  h.c_[0] = 0.0;
  Jet s, c;
  sincos_nil(h, a.order_, s, c);
  return s * std::cos(a0) + c * std::sin(a0);
}

Jet cos(const Jet& a) {
  const double a0 = a.value();
  if (!a.tab_) return Jet(std::cos(a0));
  Jet h = a;
  h.c_[0] = 0.0;
  Jet s, c;
  sincos_nil(h, a.order_, s, c);
  return c * std::cos(a0) - s * std::sin(a0);
}

Jet pow(const Jet& a, int m) {
  if (m < 0) return reciprocal(pow(a, -m));
  Jet r(1.0), base = a;
  while (m) {
    if (m & 1) r = r * base;
    m >>= 1;
    if (m) base = base * base;
  }
  return r;
}

}  // namespace ckp
