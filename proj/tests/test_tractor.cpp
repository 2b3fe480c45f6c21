#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ckp/tractor.hpp"

using namespace ckp;

namespace {

// |d_c T + A^_c T - T A_c| over c, for a transform T between two connections
double intertwining(const JetMatrix& T, const JetMatrix& A, const JetMatrix& Ah, int n) {
  const int N = T.rows();
  double err = 0;
  for (int c = 0; c < n; ++c) {
    const Eigen::MatrixXd r = T.derivative(c).value() + Ah.value().block(c * N, 0, N, N) * T.value() -
                              T.value() * A.value().block(c * N, 0, N, N);
    err = std::max(err, r.norm());
  }
  return err;
}

struct Setup {
  MetricChart chart;
  Expr f;
  std::vector<double> x;
};

Setup generic(int n) {
  std::vector<double> x(n, 0.05);
  x[0] = -0.08;
  return {MetricChart::perturbed(n, 0.3, 7), random_conformal_factor(n, 11), x};
}

}  // namespace

TEST_CASE("flat and sphere tractor connections are flat") {
  for (int k = 1; k <= 3; ++k) {
    for (const auto& chart : {MetricChart::flat(5), MetricChart::round_sphere(5, 1.3)}) {
      const auto pack = curvature_pack(chart, {0.1, -0.1, 0.05, 0.0, 0.02}, 4);
      const auto A = connection_matrix(point_data(pack, k, 1));
      CHECK(connection_curvature(A).value().norm() < 1e-12);
    }
  }
}

TEST_CASE("tractor curvature equals the Weyl and Cotton action") {
  for (int n : {4, 5}) {
    const auto s = generic(n);
    const auto pack = curvature_pack(s.chart, s.x, 4);
    for (int k = 1; k <= n - 2; ++k) {
      const auto R = connection_curvature(connection_matrix(point_data(pack, k, 1)));
      const auto K = curvature_action(point_data(pack, k, 0));
      CHECK(K.value().norm() > 1e-2);
      CHECK((R.value() - K.value()).norm() < 1e-12 * K.value().norm());
    }
  }
}

TEST_CASE("connection splits into tractor and Levi-Civita parts") {
  const auto s = generic(4);
  const auto pd = point_data(curvature_pack(s.chart, s.x, 3), 2, 0);
  const auto sum = connection_algebraic(pd) + gamma_part(pd);
  CHECK((sum.value() - connection_matrix(pd).value()).norm() < 1e-14);
}

TEST_CASE("rescaling intertwines the connections") {
  for (int n : {4, 5}) {
    const auto s = generic(n);
    const auto pack = curvature_pack(s.chart, s.x, 4);
    const auto rp = conformal_rescale_pack(s.chart, s.f, s.x, 4);
    for (int k = 1; k <= n - 2; ++k) {
      auto pd1 = point_data(pack, k, 1);
      pd1.set_rescale(rp.upsilon);
      const auto A = connection_matrix(point_data(pack, k, 0));
      const auto Ah = connection_matrix(point_data(rp.pack, k, 0));
      const auto T = transform_matrix(pd1, rp.f, TransformReading::Consistent);
      CHECK(intertwining(T, A, Ah, n) < 1e-12);
      // the printed top-slot law leaves a visible defect
      const auto Tp = transform_matrix(pd1, rp.f, TransformReading::Printed);
      CHECK(intertwining(Tp, A, Ah, n) > 1e-4);
    }
    auto pd1 = point_data(pack, 1, 1);
    pd1.set_rescale(rp.upsilon);
    const auto S = standard_transform_matrix(pd1, rp.f);
    CHECK(intertwining(S, standard_connection_matrix(point_data(pack, 1, 0)),
                       standard_connection_matrix(point_data(rp.pack, 1, 0)), n) < 1e-12);
  }
}

TEST_CASE("standard tractor metric is parallel and Lorentzian") {
  const int n = 4, N = n + 2;
  const auto s = generic(n);
  const auto pack = curvature_pack(s.chart, s.x, 4);
  const auto pd1 = point_data(pack, 1, 1);
  const Eigen::MatrixXd h = standard_metric(pd1);
  const Eigen::MatrixXd A = standard_connection_matrix(point_data(pack, 1, 0)).value();
  for (int c = 0; c < n; ++c) {
    Eigen::MatrixXd dh = Eigen::MatrixXd::Zero(N, N);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) dh(1 + a, 1 + b) = pd1.gi(a, b).partial(c);
    const Eigen::MatrixXd Ac = A.block(c * N, 0, N, N);
    CHECK((dh - Ac.transpose() * h - h * Ac).norm() < 1e-12);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  int neg = 0;
  for (int i = 0; i < N; ++i) neg += es.eigenvalues()(i) < 0;
  CHECK(neg == 1);
}

TEST_CASE("k = 1 form tractors are the second exterior power") {
  const int n = 5;
  const auto s = generic(n);
  const auto pack = curvature_pack(s.chart, s.x, 4);
  const auto rp = conformal_rescale_pack(s.chart, s.f, s.x, 4);
  auto pd0 = point_data(pack, 1, 0);
  pd0.set_rescale(rp.upsilon);
  const Eigen::MatrixXd T0 = transform_matrix(pd0, rp.f).value();
  const Eigen::MatrixXd S0 = standard_transform_matrix(pd0, rp.f).value();
  const Eigen::MatrixXd W = wedge_map(n);
  const int N = n + 2;
  const auto& pairs = FormBasis::get(N, 2);
  Eigen::MatrixXd L2(pairs.dim(), pairs.dim());
  for (int j = 0; j < pairs.dim(); ++j) {
    const int a = pairs.tuple(j)[0], b = pairs.tuple(j)[1];
    for (int i = 0; i < pairs.dim(); ++i) {
      const int p = pairs.tuple(i)[0], q = pairs.tuple(i)[1];
      L2(i, j) = S0(p, a) * S0(q, b) - S0(q, a) * S0(p, b);
    }
  }
  CHECK((W * L2 - T0 * W).norm() < 1e-12 * T0.norm());
}

TEST_CASE("blockwise and wedge helpers") {
  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 3, 4;
  const Eigen::MatrixXd b = blockwise(m, 3);
  CHECK(b.rows() == 6);
  CHECK(b(2, 3) == 2);
  CHECK(b(0, 3) == 0);
  const auto s = generic(4);
  const auto pd = point_data(curvature_pack(s.chart, s.x, 3), 2, 1);
  const auto A = connection_matrix(pd);
  const auto X = connection_algebraic(pd);
  const auto XX = wedge_end(X, X);
  // X ^ X is alternating in (c1, c2): compare with the swapped product sum
  const int N = ChainSpace::get(4, 2, 0).tdim();
  const Eigen::MatrixXd Xv = X.value();
  const Eigen::MatrixXd expect = Xv.block(0, 0, N, N) * Xv.block(N, 0, N, N) - Xv.block(N, 0, N, N) * Xv.block(0, 0, N, N);
  CHECK((XX.value().block(0, 0, N, N) - expect).norm() < 1e-13);
  CHECK(A.order() == 1);
}
