#pragma once
// Kostant differentials on the chains C_l = Lambda^l T*M (x) T, the pairing that
// makes them adjoint, the Kostant Laplacian, Hodge splitting, homology
// projections, the BGG splitting operator L0 and the first BGG operator Theta0.

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "ckp/fiber.hpp"
#include "ckp/rational.hpp"

namespace ckp {

// d : C_l -> C_{l+1} (l = 0, 1) and d* : C_l -> C_{l-1} (l = 1, 2); metric only
JetMatrix partial_matrix(const PointData& pd, int level);
JetMatrix partial_star_matrix(const PointData& pd, int level);

// full g-contraction pairing, slot weighted; gi = inverse metric value
Eigen::MatrixXd gram_matrix(const Eigen::MatrixXd& gi, const ChainSpace& sp);
Eigen::MatrixXd inverse_metric(const PointData& pd);

// values of d, d*, box at the point
struct KostantOps {
  int n = 0, k = 0;
  Eigen::MatrixXd d0, d1, ds1, ds2;  // d: 0->1, 1->2; d*: 1->0, 2->1
  Eigen::MatrixXd G0, G1, G2;
  Eigen::MatrixXd box(int level) const;
};
KostantOps kostant_ops(const PointData& pd);

// C_l = im d (+) ker box (+) im d*, for l = 0, 1 (definite signature only)
struct HodgeParts {
  Eigen::VectorXd im_partial, harmonic, im_partial_star;
};
class Hodge {
 public:
  Hodge(const KostantOps& ops, int level);
  HodgeParts split(const Eigen::VectorXd& x) const;
  const Eigen::MatrixXd& box_pinv() const { return pinv_; }

 private:
  Eigen::MatrixXd up_, down_;  // d_{l-1} d*_l and d*_{l+1} d_l
  Eigen::MatrixXd pinv_, harm_;
};

// embedding of a single slot of a chain space as columns
Eigen::MatrixXd slot_embedding(const ChainSpace& sp, int slot);

// E_c (x) Lambda^p = alt (+) {}_0 (+) trace, closed-form projectors on product(n, 1, p)
enum class HookPart { Alt, Zero, Trace };
Eigen::MatrixXd hook_projector(const PointData& pd, int p, HookPart part);

// numeric G-orthogonal projections onto the highest weight parts
Eigen::MatrixXd project_H1_matrix(const PointData& pd);  // on product(n, 1, k)
Eigen::MatrixXd project_H2_matrix(const PointData& pd);  // on product(n, 2, k), k >= 2

// tau (k-form) -> (0; -k(k+1) g_{c[a0} tau_{a1..ak]} | (n-k) tau_{c a2..ak}; 0)
Eigen::MatrixXd tau_embed_matrix(const PointData& pd);

struct KostantEntry {
  std::string name;
  Rational expected;  // as tabulated
  double observed = 0;
  double residual = 0;  // |box u - observed u| / |u|
};
std::vector<KostantEntry> kostant_spectrum(const PointData& pd, const KostantOps& ops, std::uint64_t seed);

// ---- splitting operator and Theta0 ----------------------------------------

// section of T with only the sigma slot, from the k-form sigma (product(n, 0, k) rows)
JetMatrix sigma_section(const ChainSpace& T0, const JetMatrix& sigma);
// box^{-1} on im d* in C0, by the slot scalars (n; k+1 | n-k+1; 0)
Eigen::VectorXd box0_inverse_scalars(int n, int k);
// L0: two normalization steps s <- s - box^{-1} d*(nabla s); pd.order must be
// sigma.order() - 1 and the result has order sigma.order() - 2
JetMatrix split_L0(const PointData& pd, const JetMatrix& sigma);
// D_c sigma_{a..} as a product(n, 1, k) jet column (one order lower)
JetMatrix form_covariant_derivative(const PointData& pd, const JetMatrix& sigma);
// Theta0 sigma = Pi_1(bottom slot of nabla L0 sigma), at the point
struct Theta0Result {
  Eigen::VectorXd theta;      // projected, product(n, 1, k)
  Eigen::VectorXd nabla_L0;   // value of nabla L0 sigma in C1
  JetMatrix L0;               // the lift (order sigma.order() - 2)
};
Theta0Result theta0(const PointData& pd, const JetMatrix& sigma);

}  // namespace ckp
