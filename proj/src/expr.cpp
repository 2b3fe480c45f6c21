#include "ckp/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace ckp {

Expr::Expr(double v) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = v;
  node_ = n;
}

Expr Expr::var(int i) {
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->index = i;
  return Expr(std::shared_ptr<const Node>(n));
}

Expr Expr::make(Op op, const Expr& a, const Expr& b) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = a.node_;
  n->b = b.node_;
  return Expr(std::shared_ptr<const Node>(n));
}

Expr pow(const Expr& a, int m) {
  auto n = std::make_shared<Expr::Node>();
  n->op = Expr::Op::Pow;
  n->a = a.node_;
  n->index = m;
  return Expr(std::shared_ptr<const Expr::Node>(n));
}

int Expr::max_var() const {
  int best = -1;
  std::vector<const Node*> stack{node_.get()};
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    if (n->op == Op::Var) best = std::max(best, n->index);
    if (n->a) stack.push_back(n->a.get());
    if (n->b) stack.push_back(n->b.get());
  }
  return best;
}

namespace {
double powi(double x, int m) { return std::pow(x, m); }
Jet powi(const Jet& x, int m) { return pow(x, m); }
double expf(double x) { return std::exp(x); }
double sinf(double x) { return std::sin(x); }
double cosf(double x) { return std::cos(x); }
Jet expf(const Jet& x) { return exp(x); }
Jet sinf(const Jet& x) { return sin(x); }
Jet cosf(const Jet& x) { return cos(x); }
}  // namespace

template <class S>
S Expr::eval_node(const Node& n, const std::vector<S>& x) {
  switch (n.op) {
    case Op::Const: return S(n.value);
    case Op::Var:
      if (n.index >= static_cast<int>(x.size()))
        throw std::out_of_range("expression uses x" + std::to_string(n.index + 1) +
                                " beyond chart dimension");
      return x[n.index];
    case Op::Add: return eval_node(*n.a, x) + eval_node(*n.b, x);
    case Op::Sub: return eval_node(*n.a, x) - eval_node(*n.b, x);
    case Op::Mul: return eval_node(*n.a, x) * eval_node(*n.b, x);
    case Op::Div: return eval_node(*n.a, x) / eval_node(*n.b, x);
    case Op::Neg: return -eval_node(*n.a, x);
    case Op::Pow: return powi(eval_node(*n.a, x), n.index);
    case Op::Exp: return expf(eval_node(*n.a, x));
    case Op::Sin: return sinf(eval_node(*n.a, x));
    case Op::Cos: return cosf(eval_node(*n.a, x));
  }
  throw std::logic_error("expr: bad node");
}

double Expr::eval(const std::vector<double>& x) const { return eval_node(*node_, x); }
Jet Expr::eval(const std::vector<Jet>& x) const { return eval_node(*node_, x); }

void Expr::print(const Node& n, std::string& out) {
  auto bin = [&](const char* op) {
    out += '(';
    print(*n.a, out);
    out += op;
    print(*n.b, out);
    out += ')';
  };
  auto fn = [&](const char* name) {
    out += name;
    out += '(';
    print(*n.a, out);
    out += ')';
  };
  switch (n.op) {
    case Op::Const: {
      std::ostringstream os;
      os.precision(17);
      os << n.value;
      out += os.str();
      break;
    }
    case Op::Var: out += "x" + std::to_string(n.index + 1); break;
    case Op::Add: bin(" + "); break;
    case Op::Sub: bin(" - "); break;
    case Op::Mul: bin("*"); break;
    case Op::Div: bin("/"); break;
    case Op::Neg: out += "-"; print(*n.a, out); break;
    case Op::Pow:
      out += "pow(";
      print(*n.a, out);
      out += ", " + std::to_string(n.index) + ")";
      break;
    case Op::Exp: fn("exp"); break;
    case Op::Sin: fn("sin"); break;
    case Op::Cos: fn("cos"); break;
  }
}

std::string Expr::str() const {
  std::string s;
  print(*node_, s);
  return s;
}

// ---------------------------------------------------------------------------

class ExprParser {
 public:
  explicit ExprParser(const std::string& s) : s_(s) {}

  Expr run() {
    Expr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < s_.size(); ++i) {
      if (s_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(msg, line, col);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      if (accept('+')) e = e + term();
      else if (accept('-')) e = e - term();
      else return e;
    }
  }
  Expr term() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) e = e * unary();
      else if (accept('/')) e = e / unary();
      else return e;
    }
  }
  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return atom();
  }
  Expr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    char c = s_[pos_];
    if (accept('(')) {
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Expr(number());
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      std::string id = s_.substr(start, pos_ - start);
      if (id.size() > 1 && id[0] == 'x' &&
          id.find_first_not_of("0123456789", 1) == std::string::npos) {
        int i = std::stoi(id.substr(1));
        if (i < 1) { pos_ = start; fail("coordinates are numbered from x1"); }
        return Expr::var(i - 1);
      }
      if (id == "exp" || id == "sin" || id == "cos") {
        expect('(');
        Expr a = expr();
        expect(')');
        return id == "exp" ? exp(a) : id == "sin" ? sin(a) : cos(a);
      }
      if (id == "pow") {
        expect('(');
        Expr a = expr();
        expect(',');
        skip();
        bool neg = accept('-');
        skip();
        std::size_t s0 = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (s0 == pos_) fail("pow exponent must be an integer");
        int m = std::stoi(s_.substr(s0, pos_ - s0));
        expect(')');
        return pow(a, neg ? -m : m);
      }
      pos_ = start;
      fail("unknown identifier '" + id + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }
  double number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
      ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    double v = 0.0;
    auto res = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != s_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    return v;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

Expr Expr::parse(const std::string& text) { return ExprParser(text).run(); }

}  // namespace ckp
