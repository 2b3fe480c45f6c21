#include "ckp/metric.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

namespace ckp {

namespace {
void check_dim(int n) {
  if (n < 4 || n > kMaxDim)
    throw UnsupportedDimension("unsupported dimension n=" + std::to_string(n) + " (need 4..8)");
}

Expr radius_squared(int n) {
  Expr r2(0.0);
  for (int i = 0; i < n; ++i) r2 = r2 + pow(Expr::var(i), 2);
  return r2;
}
}  // namespace

MetricChart MetricChart::flat(int n, int p) {
  check_dim(n);
  if (p < 0) p = n;
  if (p > n) throw std::invalid_argument("flat: signature p exceeds n");
  MetricChart m;
  m.n_ = n;
  m.p_ = p;
  m.family_ = Family::Flat;
  m.id_ = "flat(" + std::to_string(p) + "," + std::to_string(n - p) + ")";
  m.g_.assign(n * n, Expr(0.0));
  for (int a = 0; a < n; ++a) m.g_[a * n + a] = Expr(a < p ? 1.0 : -1.0);
  return m;
}

MetricChart MetricChart::round_sphere(int n, double radius) {
  check_dim(n);
  if (!(radius > 0)) throw std::invalid_argument("round_sphere: radius must be positive");
  // stereographic chart: g = 4 r^4 / (r^2 + |x|^2)^2 delta
  MetricChart m;
  m.n_ = m.p_ = n;
  m.family_ = Family::RoundSphere;
  std::ostringstream os;
  os << "round_sphere(" << radius << ")";
  m.id_ = os.str();
  const double r2 = radius * radius;
  Expr factor = Expr(4.0 * r2 * r2) / pow(Expr(r2) + radius_squared(n), 2);
  m.g_.assign(n * n, Expr(0.0));
  for (int a = 0; a < n; ++a) m.g_[a * n + a] = factor;
  return m;
}

MetricChart MetricChart::conformal(const MetricChart& base, const Expr& f) {
  if (f.max_var() >= base.n_) throw std::invalid_argument("conformal: factor uses too many coordinates");
  MetricChart m = base;
  m.family_ = Family::Conformal;
  m.id_ = "conformal(" + base.id_ + ", " + f.str() + ")";
  Expr e2f = exp(Expr(2.0) * f);
  for (auto& e : m.g_)
    if (!e.is_zero()) e = e2f * e;
  return m;
}

MetricChart MetricChart::analytic(int n, std::vector<Expr> entries) {
  check_dim(n);
  if (static_cast<int>(entries.size()) != n * n) throw std::invalid_argument("analytic: need n*n entries");
  for (const auto& e : entries)
    if (e.max_var() >= n) throw std::invalid_argument("analytic: entry uses coordinate beyond n");
  MetricChart m;
  m.n_ = n;
  m.family_ = Family::Analytic;
  m.conf_flat_ = false;
  m.id_ = "analytic";
  m.g_ = std::move(entries);
  // signature from the origin
  Tensor g0 = m.metric_at(std::vector<double>(n, 0.0));
  Eigen::MatrixXd G(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) G(a, b) = g0(a, b);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
  m.p_ = static_cast<int>((es.eigenvalues().array() > 0).count());
  return m;
}

MetricChart MetricChart::perturbed(int n, double eps, std::uint64_t seed) {
  check_dim(n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_int_distribution<int> var(0, n - 1), deg(1, 3);
  std::vector<Expr> g(n * n, Expr(0.0));
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      Expr h(0.0);
      for (int t = 0; t < 4; ++t) {
        Expr mono(coef(rng));
        const int d = deg(rng);
        for (int i = 0; i < d; ++i) mono = mono * Expr::var(var(rng));
        h = h + mono;
      }
      Expr e = Expr(eps) * h;
      if (a == b) e = Expr(1.0) + e;
      g[a * n + b] = g[b * n + a] = e;
    }
  MetricChart m = analytic(n, std::move(g));
  m.family_ = Family::Perturbed;
  std::ostringstream os;
  os << "perturbed(" << eps << "," << seed << ")";
  m.id_ = os.str();
  return m;
}

Tensor MetricChart::metric_at(const std::vector<double>& x) const {
  Tensor g(n_, 2, 2);
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b) g(a, b) = g_[a * n_ + b].eval(x);
  return g;
}

std::vector<Jet> coordinate_jets(const std::vector<double>& x, int order) {
  const int n = static_cast<int>(x.size());
  const auto& t = MonomialTable::get(n, order);
  std::vector<Jet> v;
  for (int i = 0; i < n; ++i) v.push_back(Jet::variable(t, order, i, x[i]));
  return v;
}

JetTensor MetricChart::metric_jet(const std::vector<double>& x, int order) const {
  auto vars = coordinate_jets(x, order);
  const auto& t = MonomialTable::get(n_, order);
  JetTensor g(n_, 2, 2);
  for (int a = 0; a < n_; ++a)
    for (int b = a; b < n_; ++b) {
      Jet v = g_[a * n_ + b].eval(vars);
      if (v.is_constant()) {
        Jet z = Jet::zero(t, order);
        z.coeff_ref(0) = v.value();
        v = z;
      }
      g(a, b) = v;
      g(b, a) = v;
    }
  Eigen::MatrixXd G(n_, n_);
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b) G(a, b) = g(a, b).value();
  if (std::abs(G.determinant()) < 1e-10) throw std::domain_error("metric degenerate at sample point");
  return g;
}

std::vector<std::vector<double>> sample_points(int n, int count, std::uint64_t seed, double radius) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-radius, radius);
  std::vector<std::vector<double>> pts(count, std::vector<double>(n));
  for (auto& p : pts)
    for (auto& v : p) v = u(rng);
  return pts;
}

Expr random_conformal_factor(int n, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> nd(0.0, 1.0);
  Expr f(0.0);
  for (int i = 0; i < n; ++i) f = f + Expr(scale * nd(rng)) * Expr::var(i);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) f = f + Expr(0.5 * scale * nd(rng)) * Expr::var(i) * Expr::var(j);
  f = f + Expr(0.3 * scale) * sin(Expr::var(0));
  return f;
}

}  // namespace ckp
