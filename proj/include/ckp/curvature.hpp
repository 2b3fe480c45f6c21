#pragma once
// Levi-Civita connection and curvature decomposition from metric jets.
//
// Conventions:
//   R^a_{bcd} = d_c G^a_{db} - d_d G^a_{cb} + G^a_{ce} G^e_{db} - G^a_{de} G^e_{cb}
//   R_{abcd} = g_{ae} R^e_{bcd},  Ric_{ab} = R^c_{acb}
//   P = (Ric - R g / (2(n-1))) / (n-2)
//   C = Riem - (g_ac P_bd - g_ad P_bc + g_bd P_ac - g_bc P_ad)
//   A_{e c1 c2} = D_{c1} P_{c2 e} - D_{c2} P_{c1 e}
// Each field keeps as many jet orders as the metric allows (g order J gives
// Gamma J-1, curvature J-2, A and DC J-3).

#include <vector>

#include "ckp/metric.hpp"
#include "ckp/tensor.hpp"

namespace ckp {

struct CurvaturePack {
  int n = 0;
  int order = 0;             // jet order of g
  JetTensor g, ginv;
  JetTensor Gamma;           // (a, b, c) = Gamma^a_{bc}
  JetTensor Riem, Ric, P, C;
  Jet R;
  JetTensor DP;              // (c, a, b) = D_c P_ab
  JetTensor A;               // (e, c1, c2)
  JetTensor DC;              // (u, a, b, c, d) = D_u C_abcd
};

// inverse of a jet matrix (partial pivoting on values)
JetTensor inverse(const JetTensor& g);

CurvaturePack curvature_pack(const JetTensor& g);
CurvaturePack curvature_pack(const MetricChart& chart, const std::vector<double>& x, int jet_order);

struct RescaledPack {
  CurvaturePack pack;  // quantities of g^ = e^{2f} g
  Jet f;
  std::vector<Jet> upsilon;  // d f, one order below f
};
RescaledPack conformal_rescale_pack(const MetricChart& chart, const Expr& f,
                                    const std::vector<double>& x, int jet_order);

// value-level helpers
Tensor covariant_derivative(const CurvaturePack& p, const JetTensor& t);  // all-lower tensor

// identity residuals (max abs), evaluated at the expansion point
struct IdentityResiduals {
  double weyl_trace = 0, weyl_alt3 = 0, cotton_alt3 = 0, bianchi = 0, first_bianchi = 0;
};
IdentityResiduals identity_residuals(const CurvaturePack& p);

// D^C_{uabcd} of g^ mapped back: e^{-2f} D^C_hat computed directly, and the two
// right-hand sides (printed law, corrected law) built from g, Upsilon.
struct DhatWeyl {
  Tensor direct, printed, corrected;
};
DhatWeyl dhat_weyl(const CurvaturePack& p, const RescaledPack& r);

}  // namespace ckp
