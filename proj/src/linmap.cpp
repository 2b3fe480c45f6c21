#include "ckp/linmap.hpp"

#include <algorithm>
#include <stdexcept>

namespace ckp {

JetMatrix::JetMatrix(int rows, int cols, const MonomialTable* tab, int order)
    : rows_(rows), cols_(cols), tab_(tab), order_(tab ? order : Jet::kConst) {
  const int terms = tab ? tab->count(order) : 1;
  c_.assign(terms, Eigen::MatrixXd::Zero(rows, cols));
}

JetMatrix JetMatrix::constant(const Eigen::MatrixXd& m) {
  JetMatrix r(static_cast<int>(m.rows()), static_cast<int>(m.cols()), nullptr, 0);
  r.c_[0] = m;
  return r;
}

void JetMatrix::add(int r, int c, const Jet& j, double s) {
  if (!tab_ || j.is_constant()) {
    c_[0](r, c) += s * j.value();
    return;
  }
  if (j.order() < order_) throw std::invalid_argument("jet matrix: entry order below matrix order");
  const int terms = static_cast<int>(c_.size());
  const auto& jc = j.coeffs();
  for (int m = 0; m < terms; ++m) c_[m](r, c) += s * jc[m];
}

Jet JetMatrix::at(int r, int c) const {
  if (!tab_) return Jet(c_[0](r, c));
  Jet j = Jet::zero(*tab_, order_);
  for (int m = 0; m < terms(); ++m) j.coeff_ref(m) = c_[m](r, c);
  return j;
}

JetMatrix JetMatrix::derivative(int var) const {
  if (!tab_) return JetMatrix(rows_, cols_, nullptr, 0);
  if (order_ == 0) throw std::domain_error("jet matrix: derivative order exhausted");
  JetMatrix d(rows_, cols_, tab_, order_ - 1);
  for (int m = 0; m < d.terms(); ++m)
    d.c_[m] = c_[tab_->raise(m, var)] * static_cast<double>(tab_->exponents(m)[var] + 1);
  return d;
}

JetMatrix JetMatrix::truncated(int order) const {
  if (!tab_ || order >= order_) return *this;
  JetMatrix r = *this;
  r.lower_order(order);
  return r;
}

void JetMatrix::lower_order(int order) {
  order_ = order;
  c_.resize(tab_->count(order));
}

JetMatrix JetMatrix::rows_block(int start, int count) const {
  JetMatrix r(count, cols_, tab_, order_);
  for (int m = 0; m < terms(); ++m) r.c_[m] = c_[m].middleRows(start, count);
  return r;
}

void JetMatrix::set_rows_block(int start, const JetMatrix& m) {
  if (m.cols_ != cols_) throw std::invalid_argument("jet matrix: column mismatch");
  if (m.tab_ && tab_ && m.order_ < order_) lower_order(m.order_);
  if (m.tab_ && !tab_) {
    // promote to the block's table
    JetMatrix p(rows_, cols_, m.tab_, m.order_);
    p.c_[0] = c_[0];
    *this = std::move(p);
  }
  for (int t = 0; t < terms(); ++t) {
    if (t < m.terms()) c_[t].middleRows(start, m.rows_) = m.c_[t];
    else c_[t].middleRows(start, m.rows_).setZero();
  }
}

JetMatrix& JetMatrix::operator+=(const JetMatrix& o) {
  if (o.rows_ != rows_ || o.cols_ != cols_) throw std::invalid_argument("jet matrix: shape mismatch");
  if (o.tab_ && !tab_) {
    JetMatrix p = o;
    p.c_[0] += c_[0];
    return *this = std::move(p);
  }
  if (o.tab_ && o.order_ < order_) lower_order(o.order_);
  const int t = std::min(terms(), o.terms());
  for (int m = 0; m < t; ++m) c_[m] += o.c_[m];
  return *this;
}

JetMatrix& JetMatrix::operator-=(const JetMatrix& o) {
  JetMatrix neg = o;
  neg *= -1.0;
  return *this += neg;
}

JetMatrix& JetMatrix::operator*=(double s) {
  for (auto& m : c_) m *= s;
  return *this;
}

JetMatrix operator*(const JetMatrix& a, const JetMatrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("jet matrix: product shape mismatch");
  if (!a.tab_) return a.c_[0] * b;
  if (!b.tab_) {
    JetMatrix r(a.rows_, b.cols_, a.tab_, a.order_);
    for (int m = 0; m < a.terms(); ++m) r.c_[m].noalias() = a.c_[m] * b.c_[0];
    return r;
  }
  const MonomialTable* t = a.tab_;
  const int ord = std::min(a.order_, b.order_);
  JetMatrix r(a.rows_, b.cols_, t, ord);
  for (int i = 0; i < t->count(ord); ++i) {
    const int cb = t->count(ord - t->degree(i));
    for (int j = 0; j < cb; ++j) r.c_[t->product(i, j)].noalias() += a.c_[i] * b.c_[j];
  }
  return r;
}

JetMatrix operator*(const Eigen::MatrixXd& a, const JetMatrix& b) {
  JetMatrix r(static_cast<int>(a.rows()), b.cols_, b.tab_, b.order_);
  for (int m = 0; m < b.terms(); ++m) r.c_[m].noalias() = a * b.c_[m];
  return r;
}

}  // namespace ckp
