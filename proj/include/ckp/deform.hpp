#pragma once
// Curvature-built maps C0 -> C1, the deformation Psi of the tractor connection,
// the curvature of the deformed connection, and the obstruction Phi.

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "ckp/bgg.hpp"
#include "ckp/fiber.hpp"
#include "ckp/rational.hpp"

namespace ckp {

// L*, R* feed the middle slots from sigma; E* (phi), T* (mu), F*, G* (sigma)
// feed the top slot. Every formula is alternated over its output form block.
enum class MapId { L1, L2, R1, R2, E1, E2, T1, T2, F1, F2, F3, F4, G1, G2, G3 };
constexpr int kMapCount = 15;
const char* map_name(MapId id);
MapId map_from_index(int i);
// smallest k for which the map is defined (zero below)
int map_kmin(MapId id);

// the map as a full C0 -> C1 matrix (zero outside its slot block)
JetMatrix catalogue_map(const PointData& pd, MapId id);

struct PsiCoefficients {
  Rational l1, l2, r1, r2;                   // middle slots
  Rational e1, e2, t1, t2, f1, f2, f3, f4;   // top slot
  Rational g1, g2, g3;
  // (name, value) in display order
  std::vector<std::pair<std::string, Rational>> table() const;
  Rational of(MapId id) const;
};
PsiCoefficients psi_coefficients(int n, int k);

enum class PsiStage { One, Full };
JetMatrix psi_matrix(const PointData& pd, PsiStage stage);

// closed form of d*(K. s) in terms of the catalogue, C0 -> C1
JetMatrix delstar_K_closed(const PointData& pd);

// obstruction Phi(sigma) = Pi_H2(C_{c1c2[a1}^p sigma_{|p|a2..ak]}), product(n,0,k) -> product(n,2,k)
Eigen::MatrixXd weyl_action_matrix(const PointData& pd);
Eigen::MatrixXd obstruction_matrix(const PointData& pd);

// curvature of the deformed connection and the normalization condition;
// pd1 has jet order 1, pd0 is the same point at order 0
struct NormalizationResult {
  double full = 0;         // |d* R| / |R| for d + A + Psi
  double psi1_middle = 0;  // middle-slot rows of d* R for d + A + Psi1, relative
  double psi1_top = 0;     // top-slot rows, relative
  double stage1 = 0;       // |R(A + Psi1) - (K. + d^nabla Psi1)| / |R|
  // sigma -> sigma blocks of R and K. differ by a d-exact term; they agree
  // after projection to H2 (k >= 2), and R has no blocks lowering the slot
  double hom0_raw = 0;     // |R - K.| on sigma -> sigma, relative to |K.| there
  double hom0_h2 = 0;      // same after Pi_H2, relative
  double negative_shift = 0;  // max |R| on slot-lowering blocks
  double curvature_norm = 0;
};
NormalizationResult normalization(const PointData& pd1, const PointData& pd0);

// k = 1: the contraction i_s K of s in Lambda^2 S = so(S) into the standard
// tractor curvature, as a C0 -> C1 matrix; pd1 has jet order 1
Eigen::MatrixXd contract_sK(const PointData& pd1);

}  // namespace ckp
