#pragma once
// Matrices whose entries are jets, stored as one dense matrix per monomial
// ("jet of matrices"). A constant matrix has no table and a single term.
// Used for connection matrices, sections with derivatives, and their products.

#include <Eigen/Dense>
#include <vector>

#include "ckp/jet.hpp"

namespace ckp {

class JetMatrix {
 public:
  JetMatrix() = default;
  // zero matrix; tab == nullptr gives a constant
  JetMatrix(int rows, int cols, const MonomialTable* tab, int order);
  static JetMatrix constant(const Eigen::MatrixXd& m);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int order() const { return order_; }
  const MonomialTable* table() const { return tab_; }
  bool is_constant() const { return tab_ == nullptr; }
  int terms() const { return static_cast<int>(c_.size()); }
  Eigen::MatrixXd& coeff(int m) { return c_[m]; }
  const Eigen::MatrixXd& coeff(int m) const { return c_[m]; }
  const Eigen::MatrixXd& value() const { return c_[0]; }

  // acc(r, c) += s * j, truncated to this matrix's order
  void add(int r, int c, const Jet& j, double s = 1.0);
  Jet at(int r, int c) const;

  JetMatrix derivative(int var) const;
  JetMatrix truncated(int order) const;
  JetMatrix rows_block(int start, int count) const;
  void set_rows_block(int start, const JetMatrix& m);

  JetMatrix& operator+=(const JetMatrix& o);
  JetMatrix& operator-=(const JetMatrix& o);
  JetMatrix& operator*=(double s);
  friend JetMatrix operator+(JetMatrix a, const JetMatrix& b) { return a += b; }
  friend JetMatrix operator-(JetMatrix a, const JetMatrix& b) { return a -= b; }
  friend JetMatrix operator*(JetMatrix a, double s) { return a *= s; }
  friend JetMatrix operator*(double s, JetMatrix a) { return a *= s; }
  friend JetMatrix operator*(const JetMatrix& a, const JetMatrix& b);
  // constant left factor
  friend JetMatrix operator*(const Eigen::MatrixXd& a, const JetMatrix& b);

 private:
  void lower_order(int order);
  int rows_ = 0, cols_ = 0;
  const MonomialTable* tab_ = nullptr;
  int order_ = Jet::kConst;
  std::vector<Eigen::MatrixXd> c_;
};

}  // namespace ckp
