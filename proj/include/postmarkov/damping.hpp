#pragma once

#include <array>
#include <string_view>

#include "postmarkov/qops.hpp"

namespace postmarkov {

struct ModelParams {
  double gamma = 1.0;  // decay rate
  double nbar = 1.0;   // thermal occupation
  double chi = 1.0;    // memory-kernel rate, k(t) = chi exp(-chi t)
  double J = 2.0;      // ancilla Hamiltonian H_A = J sigma_z

  // Throws DomainError unless gamma >= 0, nbar >= 0, chi > 0 and all finite.
  void validate() const;
};

// Damping-basis slot order (0, z, +, -). Two-qubit product index is 4*i + j.
enum DampingIndex : int { kIdx0 = 0, kIdxZ = 1, kIdxPlus = 2, kIdxMinus = 3 };
inline constexpr int kBasisSize = 4;
std::string_view index_name(int i);

// Right eigenoperators of the single-qubit dissipator, their biorthonormal
// duals (Tr[dual_i op_j] = delta_ij) and the eigenvalues.
struct DampingBasis {
  std::array<ComplexMatrix, kBasisSize> ops;
  std::array<ComplexMatrix, kBasisSize> duals;
  std::array<Complex, kBasisSize> eigvals;

  ComplexMatrix product_op(int a) const { return kron(ops[a / 4], ops[a % 4]); }
  ComplexMatrix product_dual(int a) const { return kron(duals[a / 4], duals[a % 4]); }
};

// 4x4 matrix of the thermal amplitude-damping Liouvillian on column-stacked
// 2x2 operators.
ComplexMatrix liouvillian_superop(const ModelParams& p);

// Requires gamma > 0; throws DegenerateSpectrumError otherwise.
DampingBasis damping_basis(const ModelParams& p);

// {1/2, sigma_z, sigma_+, sigma_-} with all eigenvalues zero. Used when
// gamma = 0 and the dissipator vanishes.
DampingBasis free_basis();

// damping_basis for gamma > 0, free_basis for gamma = 0.
DampingBasis propagation_basis(const ModelParams& p);

// Full tensor h^{kl}_{ij} = Tr{(dual_i x dual_j) [1 x J sigma_z, op_k x op_l]},
// row 4i+j, column 4k+l.
ComplexMatrix h_tensor(double J, const DampingBasis& basis);

struct HCoefficients {
  std::array<Complex, kBasisSize> h;  // diagonal entries, indexed by j
  double offdiag_max = 0.0;           // largest |h^{kl}_{ij}| off the diagonal
};

HCoefficients h_coefficients(double J, const DampingBasis& basis);

// c_a = Tr[dual_a rho] for a 2x2 (4 coefficients) or 4x4 (16) operator.
ComplexVector decompose(const ComplexMatrix& rho, const DampingBasis& basis);
ComplexMatrix reconstruct(const ComplexVector& coeffs, const DampingBasis& basis);

}  // namespace postmarkov
