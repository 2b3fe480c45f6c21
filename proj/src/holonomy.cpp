#include "ckp/holonomy.hpp"

#include <algorithm>
#include <cmath>

#include "ckp/deform.hpp"
#include "ckp/tractor.hpp"

namespace ckp {

ConnectionField deformed_connection(const MetricChart& chart, int k) {
  auto at = [chart, k](const std::vector<double>& x) {
    const PointData pd = point_data(curvature_pack(chart, x, 3), k, 0);
    return Eigen::MatrixXd(connection_matrix(pd).value() + psi_matrix(pd, PsiStage::Full).value());
  };
  if (chart.family() != MetricChart::Family::Flat) return at;
  // constant coefficients: the connection does not depend on the point
  const Eigen::MatrixXd a = at(std::vector<double>(chart.dim(), 0.0));
  return [a](const std::vector<double>&) { return a; };
}

std::vector<Loop> default_loops(int n, double size) {
  std::vector<Loop> loops;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) loops.push_back({a, b, size, std::vector<double>(n, 0.0)});
  return loops;
}

namespace {

// d/dt Phi = -(sum_c v^c A_c(x(t))) Phi along x(t) = x0 + t v, t in [0, 1]
struct Segment {
  const ConnectionField& A;
  std::vector<double> x0, v;
  int dim;

  Eigen::MatrixXd rhs(double t, const Eigen::MatrixXd& phi) const {
    std::vector<double> x(x0);
    for (size_t i = 0; i < x.size(); ++i) x[i] += t * v[i];
    const Eigen::MatrixXd a = A(x);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    for (size_t c = 0; c < v.size(); ++c)
      if (v[c] != 0.0) m += v[c] * a.middleRows(static_cast<Eigen::Index>(c) * dim, dim);
    return -m * phi;
  }

  Eigen::MatrixXd rk4(double t, double h, const Eigen::MatrixXd& y) const {
    const Eigen::MatrixXd k1 = rhs(t, y);
    const Eigen::MatrixXd k2 = rhs(t + h / 2, y + h / 2 * k1);
    const Eigen::MatrixXd k3 = rhs(t + h / 2, y + h / 2 * k2);
    const Eigen::MatrixXd k4 = rhs(t + h, y + h * k3);
    return y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
};

void integrate(const Segment& seg, Eigen::MatrixXd& y, double tol, int max_steps, Transport& out) {
  double t = 0, h = 0.125;
  while (t < 1.0) {
    if (out.steps + out.rejected >= max_steps) throw TransportError("step limit reached at t = " + std::to_string(t));
    h = std::min(h, 1.0 - t);
    const Eigen::MatrixXd full = seg.rk4(t, h, y);
    const Eigen::MatrixXd half = seg.rk4(t + h / 2, h / 2, seg.rk4(t, h / 2, y));
    const double err = (half - full).cwiseAbs().maxCoeff() / 15.0;
    if (!std::isfinite(err)) throw TransportError("non-finite state at t = " + std::to_string(t));
    if (err <= tol) {
      y = half + (half - full) / 15.0;
      t += h;
      ++out.steps;
    } else {
      ++out.rejected;
      if (h < 1e-12) throw TransportError("step size underflow at t = " + std::to_string(t));
    }
    const double grow = err > 0 ? 0.9 * std::pow(tol / err, 0.2) : 4.0;
    h *= std::clamp(grow, 0.2, 4.0);
  }
}

}  // namespace

Transport transport_loop(const ConnectionField& A, const Loop& loop, int dim, double tol, int max_steps) {
  const int n = static_cast<int>(loop.origin.size());
  if (loop.a < 0 || loop.b < 0 || loop.a >= n || loop.b >= n || loop.a == loop.b)
    throw std::invalid_argument("loop plane out of range");
  Transport out;
  out.matrix = Eigen::MatrixXd::Identity(dim, dim);
  std::vector<double> x = loop.origin;
  const int axes[4] = {loop.a, loop.b, loop.a, loop.b};
  const double signs[4] = {1, 1, -1, -1};
  for (int s = 0; s < 4; ++s) {
    std::vector<double> v(n, 0.0);
    v[axes[s]] = signs[s] * loop.size;
    integrate(Segment{A, x, v, dim}, out.matrix, tol, max_steps, out);
    x[axes[s]] += v[axes[s]];
  }
  return out;
}

HolonomyResult holonomy_dimension(const MetricChart& chart, int k, const std::vector<Loop>& loops, double threshold,
                                  double tol) {
  const int n = chart.dim();
  const int dim = ChainSpace::get(n, k, 0).dim();
  const ConnectionField A = deformed_connection(chart, k);
  HolonomyResult r;
  r.expected = binomial(n + 2, k + 1);
  Eigen::MatrixXd stacked(dim * static_cast<Eigen::Index>(std::max<size_t>(loops.size(), 1)), dim);
  stacked.setZero();
  for (size_t i = 0; i < loops.size(); ++i) {
    const Transport t = transport_loop(A, loops[i], dim, tol);
    const Eigen::MatrixXd d = t.matrix - Eigen::MatrixXd::Identity(dim, dim);
    r.max_defect = std::max(r.max_defect, d.cwiseAbs().maxCoeff());
    r.steps += t.steps;
    stacked.middleRows(static_cast<Eigen::Index>(i) * dim, dim) = d;
  }
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(stacked).singularValues();
  r.singular_values.assign(sv.data(), sv.data() + sv.size());
  std::sort(r.singular_values.begin(), r.singular_values.end());
  r.dimension = static_cast<int>(std::count_if(r.singular_values.begin(), r.singular_values.end(),
                                               [&](double s) { return s < threshold; }));
  return r;
}

}  // namespace ckp
