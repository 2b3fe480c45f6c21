#pragma once
// Standard tractors S = (rho; phi_a; sigma) and form tractors T = Lambda^{k+1} S
// with slots (sigma; phi | mu; rho), in a fixed metric trivialization.
// Connections are stored as matrices A with (nabla s)_c = d_c s + A_c s;
// rows are grouped in blocks of the level-1 chain layout (block c).

#include <Eigen/Dense>

#include "ckp/fiber.hpp"

namespace ckp {

// ---- form tractors --------------------------------------------------------

JetMatrix connection_algebraic(const PointData& pd);  // tractor part, C0 -> C1
JetMatrix gamma_part(const PointData& pd);            // Levi-Civita part on the form indices
JetMatrix connection_matrix(const PointData& pd);     // sum of the two
JetMatrix curvature_action(const PointData& pd);      // K. : C0 -> C2

// rho-hat reading: Consistent uses the transformed mu inside the Upsilon-wedge
// term (composes correctly); Printed uses the untransformed mu.
enum class TransformReading { Consistent, Printed };
// section rescale s -> s^ for g^ = e^{2f} g; needs pd.set_rescale(df)
JetMatrix transform_matrix(const PointData& pd, const Jet& f,
                           TransformReading reading = TransformReading::Consistent);

// I (x) M for chains with `blocks` c-components
Eigen::MatrixXd blockwise(const Eigen::MatrixXd& m, int blocks);

// (nabla s)_c = d_c s + A_c s; s has jets one order above the result
JetMatrix covariant_derivative(const JetMatrix& A, const JetMatrix& s);
// d^nabla on level-1 chains X (section valued): blocks (c1 < c2)
JetMatrix exterior_derivative(const JetMatrix& A, const JetMatrix& X);
// d^nabla of an End-valued one-form Psi: d Psi + [A ^ Psi]
JetMatrix exterior_derivative_end(const JetMatrix& A, const JetMatrix& Psi);
// curvature of d + A : C0 -> C2
JetMatrix connection_curvature(const JetMatrix& A);
// (X ^ Y)_{c1c2} = X_c1 Y_c2 - X_c2 Y_c1 for End-valued one-forms
JetMatrix wedge_end(const JetMatrix& X, const JetMatrix& Y);

// ---- standard tractors (rho, phi_0..phi_{n-1}, sigma) ----------------------

JetMatrix standard_connection_matrix(const PointData& pd);
JetMatrix standard_transform_matrix(const PointData& pd, const Jet& f);
Eigen::MatrixXd standard_metric(const PointData& pd);
// L(sigma) = (-(1/n)(Lap sigma + P_a^a sigma); D sigma; sigma)
JetMatrix standard_split_L(const PointData& pd, const Jet& sigma);

// k = 1: T = Lambda^2 S. wedge_map sends e_i ^ e_j (i < j) to its T-slots;
// endo_map sends it to the endomorphism w -> h(e_i, w) e_j - h(e_j, w) e_i.
Eigen::MatrixXd wedge_map(int n);
std::vector<Eigen::MatrixXd> endo_map(const Eigen::MatrixXd& h);

}  // namespace ckp
