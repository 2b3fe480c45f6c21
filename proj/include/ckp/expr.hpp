#pragma once
// Expression mini-language for metric entries and conformal factors.
//
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | atom
//   atom   := number | x<i> | '(' expr ')' | exp(expr) | sin(expr) | cos(expr)
//           | pow(expr, integer)
//
// Coordinates are x1..xn (1-based in text, 0-based internally).

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "ckp/jet.hpp"

namespace ckp {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int col)
      : std::runtime_error(msg + " at line " + std::to_string(line) + ", column " +
                           std::to_string(col)),
        line_(line), col_(col) {}
  int line() const { return line_; }
  int column() const { return col_; }

 private:
  int line_, col_;
};

class Expr {
 public:
  enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Exp, Sin, Cos };

  Expr() : Expr(0.0) {}
  Expr(double v);  // NOLINT
  static Expr var(int i);
  static Expr parse(const std::string& text);

  Op op() const { return node_->op; }
  // largest coordinate index used, -1 if none
  int max_var() const;
  bool is_zero() const { return node_->op == Op::Const && node_->value == 0.0; }
  std::string str() const;

  double eval(const std::vector<double>& x) const;
  Jet eval(const std::vector<Jet>& x) const;

  friend Expr operator+(const Expr& a, const Expr& b) { return make(Op::Add, a, b); }
  friend Expr operator-(const Expr& a, const Expr& b) { return make(Op::Sub, a, b); }
  friend Expr operator*(const Expr& a, const Expr& b) { return make(Op::Mul, a, b); }
  friend Expr operator/(const Expr& a, const Expr& b) { return make(Op::Div, a, b); }
  friend Expr operator-(const Expr& a) { return make(Op::Neg, a, Expr()); }
  friend Expr exp(const Expr& a) { return make(Op::Exp, a, Expr()); }
  friend Expr sin(const Expr& a) { return make(Op::Sin, a, Expr()); }
  friend Expr cos(const Expr& a) { return make(Op::Cos, a, Expr()); }
  friend Expr pow(const Expr& a, int m);

 private:
  struct Node {
    Op op;
    double value = 0.0;
    int index = 0;  // variable index or integer exponent
    std::shared_ptr<const Node> a, b;
  };
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Expr make(Op op, const Expr& a, const Expr& b);
  template <class S>
  static S eval_node(const Node& n, const std::vector<S>& x);
  static void print(const Node& n, std::string& out);
  friend class ExprParser;

  std::shared_ptr<const Node> node_;
};

}  // namespace ckp
