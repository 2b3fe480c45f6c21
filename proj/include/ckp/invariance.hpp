#pragma once
// Behaviour of the deformation under g^ = e^{2f} g: the H-maps, the hatted
// laws of the top-slot catalogue maps, the two coefficient tables describing
// the change of Psi, and the naturality of Psi itself.

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "ckp/curvature.hpp"
#include "ckp/deform.hpp"

namespace ckp {

constexpr int kHCount = 9;
using HCoefficients = std::array<Rational, kHCount>;  // index i-1 holds H_i

// H_i (i = 1..9): sigma -> top slot, as a C0 -> C1 matrix of values; the
// point data must carry the rescale (set_rescale)
Eigen::MatrixXd h_map(const PointData& pd, int i);
std::vector<Eigen::MatrixXd> h_maps(const PointData& pd);
Eigen::MatrixXd h_combination(const std::vector<Eigen::MatrixXd>& h, const HCoefficients& c);

// X^(s^) e^{-(k-1)f} - X(s) = sum c_i H_i(sigma) for the top-slot maps
struct HattedLaw {
  MapId map;
  HCoefficients coeff;
};
std::vector<HattedLaw> hatted_laws(int k);

// Psi^ - Psi from the hatted laws (first table) and from transforming Psi
// (second table). Literal follows the displayed tables; Corrected is the
// version derived from the hatted laws.
enum class TableReading { Literal, Corrected };
HCoefficients trans1_coefficients(int n, int k, TableReading reading);
HCoefficients trans2_coefficients(int n, int k, TableReading reading);

struct TableComparison {
  int n = 0, k = 0;
  std::vector<int> mismatched;  // H indices (1-based) where the tables differ
  bool equal() const { return mismatched.empty(); }
};
TableComparison compare_tables(int n, int k, TableReading reading);

// the same point in both metrics
struct RescaledPoint {
  PointData g, gh;       // g carries the rescale data
  Eigen::MatrixXd T;     // C0 transform
  Eigen::MatrixXd T1;    // blockwise on C1
  double weight = 1.0;   // e^{(k-1)f}
};
RescaledPoint rescaled_point(const MetricChart& chart, const Expr& f, const std::vector<double>& x, int k,
                             int jet_order);

struct InvarianceResult {
  std::vector<std::pair<std::string, double>> hatted;  // per map defined at this k, relative
  double middle = 0;        // L, R naturality, relative
  double trans1 = 0;        // top(Psi^ T)/w - top(Psi) against the corrected first table
  double trans2 = 0;        // top(T Psi)/w - top(Psi) against the corrected second table
  double trans1_literal = 0, trans2_literal = 0;
  double naturality = 0;    // |Psi^ T - T Psi| / |Psi|
  double psi_norm = 0;
};
InvarianceResult invariance_check(const RescaledPoint& rp);

}  // namespace ckp
