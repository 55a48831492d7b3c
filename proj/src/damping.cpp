#include "postmarkov/damping.hpp"

#include <cmath>
#include <sstream>

#include "postmarkov/errors.hpp"

namespace postmarkov {

void ModelParams::validate() const {
  std::ostringstream os;
  if (!std::isfinite(gamma) || !std::isfinite(nbar) || !std::isfinite(chi) ||
      !std::isfinite(J)) {
    os << "ModelParams: non-finite parameter";
  } else if (gamma < 0.0) {
    os << "ModelParams: gamma must be >= 0, got " << gamma;
  } else if (nbar < 0.0) {
    os << "ModelParams: nbar must be >= 0, got " << nbar;
  } else if (chi <= 0.0) {
    os << "ModelParams: chi must be > 0, got " << chi;
  } else {
    return;
  }
  throw DomainError(os.str());
}

std::string_view index_name(int i) {
  static constexpr std::string_view kNames[] = {"0", "z", "+", "-"};
  return kNames[i];
}

namespace {

// Lindblad term rate * (L X L^dag - {L^dag L, X}/2).
ComplexMatrix dissipator(const ComplexMatrix& jump, double rate) {
  const ComplexMatrix id = pauli::identity(2);
  const ComplexMatrix jdj = jump.adjoint() * jump;
  return rate * (sandwich_superop(jump, jump.adjoint()) - 0.5 * sandwich_superop(jdj, id) -
                 0.5 * sandwich_superop(id, jdj));
}

ComplexMatrix apply_superop(const ComplexMatrix& superop, const ComplexMatrix& x) {
  return unvec(superop * vec(x), static_cast<int>(x.rows()));
}

void fill_duals(DampingBasis& b) {
  Eigen::Matrix4cd gram;
  for (int i = 0; i < kBasisSize; ++i) {
    for (int j = 0; j < kBasisSize; ++j) gram(i, j) = (b.ops[i] * b.ops[j]).trace();
  }
  const Eigen::Matrix4cd inv = gram.inverse();
  for (int i = 0; i < kBasisSize; ++i) {
    b.duals[i] = ComplexMatrix::Zero(2, 2);
    for (int k = 0; k < kBasisSize; ++k) b.duals[i] += inv(i, k) * b.ops[k];
  }
}

}  // namespace

ComplexMatrix liouvillian_superop(const ModelParams& p) {
  p.validate();
  return dissipator(pauli::raising(), p.gamma * p.nbar) +
         dissipator(pauli::lowering(), p.gamma * (p.nbar + 1.0));
}

DampingBasis damping_basis(const ModelParams& p) {
  p.validate();
  if (p.gamma == 0.0) {
    throw DegenerateSpectrumError(
        "damping_basis: gamma = 0 gives a fourfold-degenerate zero spectrum; use free_basis");
  }
  DampingBasis b;
  b.ops[kIdx0] = 0.5 * (pauli::identity(2) - pauli::z() / (2.0 * p.nbar + 1.0));
  b.ops[kIdxZ] = pauli::z();
  // The lambda_+ = lambda_- eigenspace is spanned by sigma_+- themselves.
  b.ops[kIdxPlus] = pauli::raising();
  b.ops[kIdxMinus] = pauli::lowering();
  fill_duals(b);

  const ComplexMatrix l = liouvillian_superop(p);
  const double scale = std::max(1.0, p.gamma * (2.0 * p.nbar + 1.0));
  for (int i = 0; i < kBasisSize; ++i) {
    const ComplexMatrix image = apply_superop(l, b.ops[i]);
    b.eigvals[i] = (b.duals[i] * image).trace();
    const double residual = (image - b.eigvals[i] * b.ops[i]).cwiseAbs().maxCoeff();
    if (residual > 1e-10 * scale) {
      std::ostringstream os;
      os << "damping_basis: operator " << index_name(i) << " is not an eigenoperator (residual "
         << residual << ")";
      throw Error(os.str());
    }
  }
  b.eigvals[kIdx0] = 0.0;
  return b;
}

DampingBasis free_basis() {
  DampingBasis b;
  b.ops[kIdx0] = 0.5 * pauli::identity(2);
  b.ops[kIdxZ] = pauli::z();
  b.ops[kIdxPlus] = pauli::raising();
  b.ops[kIdxMinus] = pauli::lowering();
  fill_duals(b);
  b.eigvals.fill(0.0);
  return b;
}

DampingBasis propagation_basis(const ModelParams& p) {
  p.validate();
  return p.gamma > 0.0 ? damping_basis(p) : free_basis();
}

ComplexMatrix h_tensor(double J, const DampingBasis& basis) {
  const ComplexMatrix h = kron(pauli::identity(2), J * pauli::z());
  ComplexMatrix out(16, 16);
  for (int row = 0; row < 16; ++row) {
    const ComplexMatrix dual = basis.product_dual(row);
    for (int col = 0; col < 16; ++col) {
      const ComplexMatrix op = basis.product_op(col);
      out(row, col) = (dual * (h * op - op * h)).trace();
    }
  }
  return out;
}

HCoefficients h_coefficients(double J, const DampingBasis& basis) {
  const ComplexMatrix t = h_tensor(J, basis);
  HCoefficients out;
  for (int j = 0; j < kBasisSize; ++j) out.h[j] = t(j, j);  // i = k = 0
  for (int row = 0; row < 16; ++row) {
    for (int col = 0; col < 16; ++col) {
      if (row != col) out.offdiag_max = std::max(out.offdiag_max, std::abs(t(row, col)));
    }
  }
  return out;
}

ComplexVector decompose(const ComplexMatrix& rho, const DampingBasis& basis) {
  if (rho.rows() == 2 && rho.cols() == 2) {
    ComplexVector c(kBasisSize);
    for (int i = 0; i < kBasisSize; ++i) c(i) = (basis.duals[i] * rho).trace();
    return c;
  }
  if (rho.rows() == 4 && rho.cols() == 4) {
    ComplexVector c(16);
    for (int a = 0; a < 16; ++a) c(a) = (basis.product_dual(a) * rho).trace();
    return c;
  }
  throw DimensionError("decompose: expected a 2x2 or 4x4 operator");
}

ComplexMatrix reconstruct(const ComplexVector& coeffs, const DampingBasis& basis) {
  if (coeffs.size() == kBasisSize) {
    ComplexMatrix out = ComplexMatrix::Zero(2, 2);
    for (int i = 0; i < kBasisSize; ++i) out += coeffs(i) * basis.ops[i];
    return out;
  }
  if (coeffs.size() == 16) {
    ComplexMatrix out = ComplexMatrix::Zero(4, 4);
    for (int a = 0; a < 16; ++a) out += coeffs(a) * basis.product_op(a);
    return out;
  }
  throw DimensionError("reconstruct: expected 4 or 16 coefficients");
}

}  // namespace postmarkov
