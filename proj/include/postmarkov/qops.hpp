#pragma once

// Dense operator algebra for one and two qubits.
//
// Conventions used everywhere in the library:
//   |0> = (1,0)^T, sigma_z |0> = +|0>, sigma_+ = |0><1|, sigma_- = |1><0|.
//   Two-qubit operators are ordered system (x) ancilla.
//   Superoperators act on column-stacked vectors: vec(X)[r + n*c] = X(r,c),
//   so vec(A X B) = kron(B^T, A) vec(X).

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace postmarkov {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kTolHerm = 1e-10;
inline constexpr double kTolTrace = 1e-10;
inline constexpr double kTolEig = 1e-8;

namespace pauli {
ComplexMatrix identity(int dim = 2);
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
ComplexMatrix raising();   // sigma_+ = |0><1|
ComplexMatrix lowering();  // sigma_- = |1><0|
}  // namespace pauli

enum class Subsystem { kSystem, kAncilla };

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Reduces a 4x4 two-qubit operator to the 2x2 operator on `keep`.
ComplexMatrix partial_trace(const ComplexMatrix& m, Subsystem keep);

// Ascending eigenvalues of (m + m^dagger)/2.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

double hermiticity_defect(const ComplexMatrix& m);
bool all_finite(const ComplexMatrix& m);

ComplexVector vec(const ComplexMatrix& m);
ComplexMatrix unvec(const ComplexVector& v, int dim);

// Matrix of X -> a X b on column-stacked vectors.
ComplexMatrix sandwich_superop(const ComplexMatrix& a, const ComplexMatrix& b);
// Matrix of X -> -i[h, X].
ComplexMatrix commutator_superop(const ComplexMatrix& h);

// A Hermitian, unit-trace matrix of dimension 2 or 4. Positivity is recorded,
// not enforced.
class DensityMatrix {
 public:
  // Throws DimensionError for a bad shape and DomainError when Hermiticity or
  // trace are off by more than `tol`.
  explicit DensityMatrix(ComplexMatrix m, double tol = kTolHerm);

  static DensityMatrix pure(const ComplexVector& psi);

  const ComplexMatrix& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }
  double min_eigenvalue() const { return min_eig_; }
  bool is_physical() const { return min_eig_ >= -1e-9; }
  double purity() const;

 private:
  ComplexMatrix m_;
  double min_eig_;
};

// T(r, s) = (1/2) sum |eig(r - s)|.
double trace_distance(const DensityMatrix& r, const DensityMatrix& s);

}  // namespace postmarkov
