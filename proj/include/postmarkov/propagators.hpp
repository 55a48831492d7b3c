#pragma once

#include <string_view>
#include <vector>

#include "postmarkov/damping.hpp"

namespace postmarkov {

enum class PropagatorKind {
  kSinglePm,      // damped qubit under the post-Markovian equation
  kTwoIntuitive,  // system generator + ancilla commutator added side by side
  kTwoSl,         // ancilla folded into the memory-kernel construction
  kTwoCorrected,  // product of the single-qubit map and the ancilla unitary
};

std::string_view kind_name(PropagatorKind kind);
// Accepts the names returned by kind_name; throws ConfigError otherwise.
PropagatorKind parse_kind(std::string_view name);

// Per-mode resolvent data. A mode coefficient evolves as
//   zeta(t) = exp(-Omega t/2) [cosh(Delta t/2) + (numerator/Delta) sinh(Delta t/2)],
// which is even in Delta; Delta is the principal square root of delta_sq.
struct ZetaParts {
  Complex Delta;
  Complex Omega;
  Complex numerator;
  Complex delta_sq;
};

struct ZetaValue {
  Complex value;
  Complex derivative;
};

// lambda: damping eigenvalue of the system index, h: ancilla coefficient h_j.
// kSinglePm and kTwoIntuitive share the formula (kSinglePm is the h = 0 case);
// kTwoCorrected has no single-mode resolvent and is rejected.
ZetaParts zeta_parts(PropagatorKind kind, double lambda, double h, double chi);
ZetaValue evaluate_zeta(const ZetaParts& parts, double t);

struct Propagator {
  PropagatorKind kind;
  ModelParams params;
  double t = 0.0;
  DampingBasis basis;
  // Diagonal coefficients in the damping (product) basis, index 4*i + j.
  std::vector<Complex> zeta;
  std::vector<Complex> zeta_dot;
  // Matrix on column-stacked operators: 4x4 (single) or 16x16 (two-qubit).
  ComplexMatrix dense;

  int input_dim() const { return kind == PropagatorKind::kSinglePm ? 2 : 4; }
  ComplexMatrix apply(const ComplexMatrix& rho) const;
};

// All of these throw DomainError for t < 0 or invalid params.
Propagator single_pm(const ModelParams& p, double t);
Propagator two_intuitive(const ModelParams& p, double t);
Propagator two_sl(const ModelParams& p, double t);
Propagator two_corrected(const ModelParams& p, double t);
Propagator make_propagator(PropagatorKind kind, const ModelParams& p, double t);

// Sum_a zeta_a |op_a)(dual_a| as a matrix on column-stacked operators.
ComplexMatrix assemble_dense(const std::vector<Complex>& zeta, const DampingBasis& basis);

// rho(t) = Phi(t) rho0. The result must keep trace and Hermiticity within
// 1e-9; is_physical() reports the minimum-eigenvalue check.
DensityMatrix evolve(const DensityMatrix& rho0, const Propagator& prop);

}  // namespace postmarkov
