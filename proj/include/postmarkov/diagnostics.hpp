#pragma once

#include <array>
#include <vector>

#include "postmarkov/propagators.hpp"

namespace postmarkov {

// C = sum_ij E_ij (x) Phi(E_ij), input factor first.
struct ChoiMatrix {
  ComplexMatrix matrix;
  std::vector<double> eigenvalues;  // ascending
  double min_eig = 0.0;
};

// `superop` acts on column-stacked dim x dim operators.
ChoiMatrix choi(const ComplexMatrix& superop, int dim);
ChoiMatrix choi(const Propagator& prop);

// K_TCL(t) = dPhi/dt Phi^{-1}, diagonal in the damping (product) basis.
struct TimeLocalGenerator {
  double t = 0.0;
  DampingBasis basis;
  std::vector<Complex> diag_rates;  // zeta_dot / zeta, index 4*i + j
  ComplexMatrix superop;            // on column-stacked operators

  ComplexMatrix apply(const ComplexMatrix& rho) const;
};

// Throws SingularMapError naming (i, j) when |zeta_ij(t)| < 1e-12.
TimeLocalGenerator tcl_generator(PropagatorKind kind, const ModelParams& p, double t);
TimeLocalGenerator tcl_generator(const Propagator& prop);
// Generator with hand-picked diagonal rates.
TimeLocalGenerator generator_from_rates(std::vector<Complex> rates, const DampingBasis& basis,
                                        double t = 0.0);

// (Phi(t + delta) Phi(t)^{-1} - 1) / delta from the dense propagators.
ComplexMatrix finite_difference_generator(PropagatorKind kind, const ModelParams& p, double t,
                                          double delta = 1e-6);

// Orthonormal two-qubit operator basis B_0..B_15:
//   B_0 = 1/2, B_1..3 = 1 x s_j / 2, B_4..6 = s_i x 1 / 2, B_7..15 = s_i x s_j / 2
// with s = (x, y, z) and i-major order in the last block.
const std::array<ComplexMatrix, 16>& operator_basis();

// Lindblad-like form of a two-qubit generator:
//   K[rho] = -i[H_eff, rho] + sum_{b,g >= 1} K_bg (B_b rho B_g^dag - {B_g^dag B_b, rho}/2)
// K_coeffs is the full 16x16 matrix including row and column 0.
struct LindbladForm {
  ComplexMatrix H_eff;
  ComplexMatrix K_coeffs;
};

LindbladForm lindblad_decompose(const TimeLocalGenerator& g);
// `superop` must be 16x16 (two-qubit, column-stacked).
LindbladForm lindblad_decompose(const ComplexMatrix& superop);

// Column-stacked superoperator of the Lindblad-like form.
ComplexMatrix lindblad_superop(const LindbladForm& form);

// Frobenius norm of every K_bg with b >= 7 or g >= 7, i.e. everything outside
// the 7x7 top-left corner. The K_b0 entries with b >= 7 are the Hamiltonian
// sigma_i x sigma_j terms.
double correlation_block_norm(const ComplexMatrix& K_coeffs);

// Coefficient of s_i x s_j in a Hermitian two-qubit H (Tr[H P]/4), i,j in
// {0,x,y,z} as 0..3.
Complex pauli_coefficient(const ComplexMatrix& H, int i, int j);

namespace detail {
// Coefficients via sum_a Tr{B_g B_a^dag B_b^dag K[B_a]}.
ComplexMatrix coefficients_by_trace(const ComplexMatrix& superop);
// Coefficients as the superoperator scalar products <phi_bg, K>, with
// <L1, L2> = sum_a Tr{L1[B_a]^dag L2[B_a]} and phi_bg[X] = B_b X B_g^dag.
ComplexMatrix coefficients_by_inner_product(const ComplexMatrix& superop);
Complex superop_inner_product(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
}  // namespace detail

}  // namespace postmarkov
