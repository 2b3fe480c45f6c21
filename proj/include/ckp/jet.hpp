#pragma once
// Truncated multivariate Taylor polynomials ("jets") in n variables.
//
// A jet of order d stores the Taylor coefficients c_m of
//   f(x0 + h) = sum_{|m| <= d} c_m h^m
// in graded order, so lower orders are a prefix of higher ones.
// Constants carry no table and combine with anything.

#include <array>
#include <cstdint>
#include <vector>

namespace ckp {

class MonomialTable {
 public:
  static constexpr int kMaxOrder = 5;
  // one shared table per dimension, holding all monomials up to kMaxOrder
  static const MonomialTable& get(int n, int order = kMaxOrder);

  int nvars() const { return n_; }
  int max_order() const { return order_; }
  int size() const { return static_cast<int>(expo_.size()); }
  // number of monomials of degree <= d
  int count(int d) const { return start_[d + 1]; }
  int degree(int m) const { return deg_[m]; }
  const std::array<std::uint8_t, 8>& exponents(int m) const { return expo_[m]; }
  // -1 when the degrees add up past the table
  int product(int i, int j) const { return prod_[static_cast<std::size_t>(i) * size() + j]; }
  // index of m + e_var, -1 if beyond the table
  int raise(int m, int var) const { return raise_[static_cast<std::size_t>(m) * n_ + var]; }
  int index(const std::array<std::uint8_t, 8>& e) const;

 private:
  explicit MonomialTable(int n);
  int n_, order_;
  std::vector<std::array<std::uint8_t, 8>> expo_;
  std::vector<int> deg_, start_, prod_, raise_;
};

class Jet {
 public:
  static constexpr int kConst = 1 << 20;

  Jet() : c_(1, 0.0) {}
  Jet(double v) : c_(1, v) {}  // NOLINT: implicit on purpose, constants mix freely

  static Jet variable(const MonomialTable& t, int order, int var, double at);
  static Jet zero(const MonomialTable& t, int order);

  const MonomialTable* table() const { return tab_; }
  int order() const { return order_; }
  bool is_constant() const { return tab_ == nullptr; }
  double value() const { return c_[0]; }
  double coeff(int m) const { return m < static_cast<int>(c_.size()) ? c_[m] : 0.0; }
  const std::vector<double>& coeffs() const { return c_; }
  double& coeff_ref(int m) { return c_[m]; }
  // first partial derivative at the expansion point
  double partial(int var) const;

  Jet derivative(int var) const;
  Jet truncated(int order) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(double s);
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet operator-() const;

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(const Jet& a, const Jet& b);

  // acc += a*b*s without temporaries
  static void fma(Jet& acc, const Jet& a, const Jet& b, double s = 1.0);
  static void axpy(Jet& acc, const Jet& a, double s);

  friend Jet reciprocal(const Jet& a);
  friend Jet exp(const Jet& a);
  friend Jet sin(const Jet& a);
  friend Jet cos(const Jet& a);
  friend Jet pow(const Jet& a, int m);

 private:
  void resize_to(const MonomialTable* t, int order);
  const MonomialTable* tab_ = nullptr;
  int order_ = kConst;
  std::vector<double> c_;
};

inline double value_of(double v) { return v; }
inline double value_of(const Jet& j) { return j.value(); }

}  // namespace ckp
