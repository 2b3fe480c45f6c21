#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ckp/deform.hpp"
#include "ckp/tractor.hpp"

using namespace ckp;

namespace {

std::vector<double> point(int n) {
  std::vector<double> x(n, 0.05);
  x[0] = 0.1;
  x[n - 1] = -0.07;
  return x;
}

}  // namespace

TEST_CASE("coefficient table") {
  for (int n = 4; n <= 8; ++n)
    for (int k = 1; k <= n - 2; ++k) {
      const auto c = psi_coefficients(n, k);
      const auto table = c.table();
      REQUIRE(table.size() == kMapCount);
      for (int i = 0; i < kMapCount; ++i) {
        const MapId id = map_from_index(i);
        CHECK(c.of(id) == table[i].second);
        // coefficients of maps that vanish at this k are reported as zero
        if (k < map_kmin(id)) CHECK(c.of(id).numerator() == 0);
      }
    }
  // k = 1: only the Weyl-to-middle and Cotton-to-top maps survive
  const auto c = psi_coefficients(5, 1);
  CHECK(c.l1 == Rational(1));
  CHECK(c.f1 == Rational(-1));
  CHECK(c.l2.numerator() == 0);
  CHECK(c.e1.numerator() == 0);
  CHECK(std::string(map_name(MapId::G3)) == "G3");
}

TEST_CASE("deformation vanishes on conformally flat metrics") {
  const auto flat = curvature_pack(MetricChart::flat(5), point(5), 4);
  const auto sphere = curvature_pack(MetricChart::round_sphere(5, 1.0), point(5), 4);
  for (int k = 1; k <= 3; ++k) {
    CHECK(psi_matrix(point_data(flat, k, 0), PsiStage::Full).value().norm() == 0.0);
    CHECK(psi_matrix(point_data(sphere, k, 0), PsiStage::Full).value().norm() < 1e-12);
  }
}

TEST_CASE("closed form of d* applied to the curvature action") {
  for (int n : {4, 5, 6}) {
    const auto pack = curvature_pack(MetricChart::perturbed(n, 0.3, 7), point(n), 4);
    for (int k = 1; k <= n - 2; ++k) {
      const auto pd = point_data(pack, k, 0);
      const Eigen::MatrixXd direct = partial_star_matrix(pd, 2).value() * curvature_action(pd).value();
      const Eigen::MatrixXd closed = delstar_K_closed(pd).value();
      CHECK(direct.norm() > 1e-2);
      CHECK((direct - closed).norm() < 1e-12 * direct.norm());
    }
  }
}

TEST_CASE("deformed connection is normal") {
  for (int n : {4, 5}) {
    const auto pack = curvature_pack(MetricChart::perturbed(n, 0.3, 7), point(n), 4);
    for (int k = 1; k <= n - 2; ++k) {
      INFO("n=" << n << " k=" << k);
      const auto r = normalization(point_data(pack, k, 1), point_data(pack, k, 0));
      CHECK(r.curvature_norm > 1e-2);
      CHECK(r.full < 1e-12);
      CHECK(r.psi1_middle < 1e-12);
      CHECK(r.stage1 < 1e-12);
      CHECK(r.negative_shift < 1e-12);
      // the first stage alone leaves the top slot unnormalized
      CHECK(r.psi1_top > 1e-2);
      if (k >= 2) CHECK(r.hom0_h2 < 1e-12);
    }
  }
}

TEST_CASE("k = 1 deformation is the contraction with the curvature") {
  for (int n : {4, 5, 6}) {
    const auto pack = curvature_pack(MetricChart::perturbed(n, 0.3, 7), point(n), 4);
    const Eigen::MatrixXd psi = psi_matrix(point_data(pack, 1, 0), PsiStage::Full).value();
    const Eigen::MatrixXd iK = contract_sK(point_data(pack, 1, 1));
    CHECK(psi.norm() > 1e-2);
    CHECK((psi - iK).norm() < 1e-12 * psi.norm());
  }
}

TEST_CASE("deformation is conformally natural") {
  for (int n : {4, 5}) {
    const auto chart = MetricChart::perturbed(n, 0.3, 7);
    const Expr f = random_conformal_factor(n, 11);
    const auto x = point(n);
    const auto pack = curvature_pack(chart, x, 4);
    const auto rp = conformal_rescale_pack(chart, f, x, 4);
    for (int k = 1; k <= n - 2; ++k) {
      auto pd = point_data(pack, k, 0);
      pd.set_rescale(rp.upsilon);
      const Eigen::MatrixXd T = transform_matrix(pd, rp.f).value();
      const Eigen::MatrixXd P = psi_matrix(pd, PsiStage::Full).value();
      const Eigen::MatrixXd Ph = psi_matrix(point_data(rp.pack, k, 0), PsiStage::Full).value();
      CHECK((Ph * T - blockwise(T, n) * P).norm() < 1e-12 * P.norm());
    }
  }
}

TEST_CASE("obstruction") {
  for (int n : {4, 5, 6}) {
    const auto chart = MetricChart::perturbed(n, 0.3, 7);
    const Expr f = random_conformal_factor(n, 3);
    const auto x = point(n);
    const auto pack = curvature_pack(chart, x, 4);
    const auto rp = conformal_rescale_pack(chart, f, x, 4);
    const auto sphere = curvature_pack(MetricChart::round_sphere(n, 1.0), x, 4);
    for (int k = 2; k <= n - 2; ++k) {
      const auto pd = point_data(pack, k, 0);
      const Eigen::MatrixXd O = obstruction_matrix(pd);
      CHECK(O.norm() > 1e-2);
      // values lie in the highest weight part
      const Eigen::MatrixXd H2 = project_H2_matrix(pd);
      CHECK((H2 * O - O).norm() < 1e-12 * O.norm());
      // weight-zero invariance of the matrix (both sides scale by e^{(k+1)f})
      const Eigen::MatrixXd Oh = obstruction_matrix(point_data(rp.pack, k, 0));
      CHECK((Oh - O).norm() < 1e-12 * O.norm());
      CHECK(obstruction_matrix(point_data(sphere, k, 0)).norm() < 1e-12);
      // it is the sigma-to-sigma block of the curvature action, projected
      const auto pd1 = point_data(pack, k, 1);
      const Eigen::MatrixXd R =
          connection_curvature(connection_matrix(pd1) + psi_matrix(pd1, PsiStage::Full)).value();
      const Eigen::MatrixXd E2 = slot_embedding(ChainSpace::get(n, k, 2), kSigma);
      const Eigen::MatrixXd E0 = slot_embedding(ChainSpace::get(n, k, 0), kSigma);
      CHECK((H2 * E2.transpose() * R * E0 - k * O).norm() < 1e-11 * O.norm());
    }
  }
}
