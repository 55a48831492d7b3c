#include "postmarkov/qops.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "postmarkov/errors.hpp"

namespace postmarkov {

namespace pauli {

ComplexMatrix identity(int dim) { return ComplexMatrix::Identity(dim, dim); }

ComplexMatrix x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix y() {
  ComplexMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

ComplexMatrix z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

ComplexMatrix raising() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

ComplexMatrix lowering() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(1, 0) = 1.0;
  return m;
}

}  // namespace pauli

namespace {

void require_square(const ComplexMatrix& m, const char* op) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << op << ": expected a square matrix, got " << m.rows() << "x" << m.cols();
    throw DimensionError(os.str());
  }
}

}  // namespace

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, Subsystem keep) {
  if (m.rows() != 4 || m.cols() != 4) {
    std::ostringstream os;
    os << "partial_trace: expected 4x4, got " << m.rows() << "x" << m.cols();
    throw DimensionError(os.str());
  }
  // Row index = 2*s + a.
  ComplexMatrix out = ComplexMatrix::Zero(2, 2);
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      for (int k = 0; k < 2; ++k) {
        if (keep == Subsystem::kSystem) {
          out(r, c) += m(2 * r + k, 2 * c + k);
        } else {
          out(r, c) += m(2 * k + r, 2 * k + c);
        }
      }
    }
  }
  return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  require_square(m, "hermitian_eigenvalues");
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = solver.eigenvalues();
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end());
  return out;
}

double hermiticity_defect(const ComplexMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    if (!std::isfinite(m.data()[k].real()) || !std::isfinite(m.data()[k].imag())) {
      return false;
    }
  }
  return true;
}

ComplexVector vec(const ComplexMatrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

ComplexMatrix unvec(const ComplexVector& v, int dim) {
  if (v.size() != static_cast<Eigen::Index>(dim) * dim) {
    throw DimensionError("unvec: vector length does not match dim*dim");
  }
  return Eigen::Map<const ComplexMatrix>(v.data(), dim, dim);
}

ComplexMatrix sandwich_superop(const ComplexMatrix& a, const ComplexMatrix& b) {
  return kron(b.transpose(), a);
}

ComplexMatrix commutator_superop(const ComplexMatrix& h) {
  require_square(h, "commutator_superop");
  const ComplexMatrix id = ComplexMatrix::Identity(h.rows(), h.cols());
  return Complex(0, -1) * (sandwich_superop(h, id) - sandwich_superop(id, h));
}

DensityMatrix::DensityMatrix(ComplexMatrix m, double tol) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || (m_.rows() != 2 && m_.rows() != 4)) {
    std::ostringstream os;
    os << "DensityMatrix: expected 2x2 or 4x4, got " << m_.rows() << "x" << m_.cols();
    throw DimensionError(os.str());
  }
  if (!all_finite(m_)) throw DomainError("DensityMatrix: non-finite entry");
  const double herm = hermiticity_defect(m_);
  if (herm > tol) {
    std::ostringstream os;
    os << "DensityMatrix: Hermiticity defect " << herm << " exceeds " << tol;
    throw DomainError(os.str());
  }
  const Complex tr = m_.trace();
  if (std::abs(tr - 1.0) > tol) {
    std::ostringstream os;
    os << "DensityMatrix: trace " << tr << " differs from 1 by more than " << tol;
    throw DomainError(os.str());
  }
  min_eig_ = hermitian_eigenvalues(m_).front();
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
  const ComplexVector n = psi / psi.norm();
  return DensityMatrix(n * n.adjoint());
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

double trace_distance(const DensityMatrix& r, const DensityMatrix& s) {
  if (r.dim() != s.dim()) {
    throw DimensionError("trace_distance: dimension mismatch");
  }
  double sum = 0.0;
  for (double e : hermitian_eigenvalues(r.matrix() - s.matrix())) sum += std::abs(e);
  return 0.5 * sum;
}

}  // namespace postmarkov
