#include "postmarkov/diagnostics.hpp"

#include <cmath>
#include <sstream>

#include "postmarkov/errors.hpp"

namespace postmarkov {

namespace {

constexpr Complex kI(0.0, 1.0);

ComplexMatrix apply_superop(const ComplexMatrix& superop, const ComplexMatrix& x) {
  return unvec(superop * vec(x), static_cast<int>(x.rows()));
}

std::array<ComplexMatrix, 16> build_operator_basis() {
  const std::array<ComplexMatrix, 4> s = {pauli::identity(2), pauli::x(), pauli::y(), pauli::z()};
  std::array<ComplexMatrix, 16> b;
  b[0] = 0.5 * kron(s[0], s[0]);
  for (int j = 1; j <= 3; ++j) b[j] = 0.5 * kron(s[0], s[j]);
  for (int i = 1; i <= 3; ++i) b[3 + i] = 0.5 * kron(s[i], s[0]);
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) b[7 + 3 * (i - 1) + (j - 1)] = 0.5 * kron(s[i], s[j]);
  }
  return b;
}

void require_two_qubit(const ComplexMatrix& superop) {
  if (superop.rows() != 16 || superop.cols() != 16) {
    std::ostringstream os;
    os << "lindblad_decompose: expected a 16x16 superoperator, got " << superop.rows() << "x"
       << superop.cols();
    throw DimensionError(os.str());
  }
}

}  // namespace

ChoiMatrix choi(const ComplexMatrix& superop, int dim) {
  if (superop.rows() != dim * dim || superop.cols() != dim * dim) {
    throw DimensionError("choi: superoperator does not act on dim x dim operators");
  }
  ChoiMatrix c;
  c.matrix = ComplexMatrix::Zero(dim * dim, dim * dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      ComplexMatrix e = ComplexMatrix::Zero(dim, dim);
      e(i, j) = 1.0;
      c.matrix.block(i * dim, j * dim, dim, dim) = apply_superop(superop, e);
    }
  }
  c.eigenvalues = hermitian_eigenvalues(c.matrix);
  c.min_eig = c.eigenvalues.front();
  return c;
}

ChoiMatrix choi(const Propagator& prop) { return choi(prop.dense, prop.input_dim()); }

ComplexMatrix TimeLocalGenerator::apply(const ComplexMatrix& rho) const {
  return apply_superop(superop, rho);
}

TimeLocalGenerator generator_from_rates(std::vector<Complex> rates, const DampingBasis& basis,
                                        double t) {
  TimeLocalGenerator g;
  g.t = t;
  g.basis = basis;
  g.superop = assemble_dense(rates, basis);
  g.diag_rates = std::move(rates);
  return g;
}

TimeLocalGenerator tcl_generator(const Propagator& prop) {
  std::vector<Complex> rates(prop.zeta.size());
  const int n_anc = prop.zeta.size() == 16 ? 4 : 1;
  for (size_t a = 0; a < prop.zeta.size(); ++a) {
    if (std::abs(prop.zeta[a]) < 1e-12) {
      const int i = static_cast<int>(a) / n_anc;
      const int j = static_cast<int>(a) % n_anc;
      std::ostringstream os;
      os << "tcl_generator: zeta_(" << index_name(i) << "," << index_name(j)
         << ") vanishes at t = " << prop.t << "; the map is not invertible";
      throw SingularMapError(os.str(), i, j);
    }
    rates[a] = prop.zeta_dot[a] / prop.zeta[a];
  }
  return generator_from_rates(std::move(rates), prop.basis, prop.t);
}

TimeLocalGenerator tcl_generator(PropagatorKind kind, const ModelParams& p, double t) {
  return tcl_generator(make_propagator(kind, p, t));
}

ComplexMatrix finite_difference_generator(PropagatorKind kind, const ModelParams& p, double t,
                                          double delta) {
  const auto now = make_propagator(kind, p, t);
  const auto later = make_propagator(kind, p, t + delta);
  const auto n = now.dense.rows();
  return (later.dense * now.dense.inverse() - ComplexMatrix::Identity(n, n)) / delta;
}

const std::array<ComplexMatrix, 16>& operator_basis() {
  static const std::array<ComplexMatrix, 16> basis = build_operator_basis();
  return basis;
}

namespace detail {

ComplexMatrix coefficients_by_trace(const ComplexMatrix& superop) {
  require_two_qubit(superop);
  const auto& b = operator_basis();
  std::array<ComplexMatrix, 16> images;
  for (int a = 0; a < 16; ++a) images[a] = apply_superop(superop, b[a]);
  ComplexMatrix k(16, 16);
  for (int beta = 0; beta < 16; ++beta) {
    for (int gam = 0; gam < 16; ++gam) {
      Complex sum = 0.0;
      for (int a = 0; a < 16; ++a) {
        sum += (b[gam] * b[a].adjoint() * b[beta].adjoint() * images[a]).trace();
      }
      k(beta, gam) = sum;
    }
  }
  return k;
}

Complex superop_inner_product(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  require_two_qubit(lhs);
  require_two_qubit(rhs);
  Complex sum = 0.0;
  for (const auto& ba : operator_basis()) {
    sum += (apply_superop(lhs, ba).adjoint() * apply_superop(rhs, ba)).trace();
  }
  return sum;
}

ComplexMatrix coefficients_by_inner_product(const ComplexMatrix& superop) {
  const auto& b = operator_basis();
  ComplexMatrix k(16, 16);
  for (int beta = 0; beta < 16; ++beta) {
    for (int gam = 0; gam < 16; ++gam) {
      k(beta, gam) = superop_inner_product(sandwich_superop(b[beta], b[gam].adjoint()), superop);
    }
  }
  return k;
}

}  // namespace detail

LindbladForm lindblad_decompose(const ComplexMatrix& superop) {
  LindbladForm form;
  form.K_coeffs = detail::coefficients_by_trace(superop);
  const auto& b = operator_basis();
  // g = (1/sqrt(N)) sum_{b >= 1} K_b0 B_b with N = 4.
  ComplexMatrix g = ComplexMatrix::Zero(4, 4);
  for (int beta = 1; beta < 16; ++beta) g += form.K_coeffs(beta, 0) * b[beta];
  g *= 0.5;
  form.H_eff = (g.adjoint() - g) / (2.0 * kI);
  return form;
}

LindbladForm lindblad_decompose(const TimeLocalGenerator& g) {
  return lindblad_decompose(g.superop);
}

ComplexMatrix lindblad_superop(const LindbladForm& form) {
  const auto& b = operator_basis();
  const ComplexMatrix id = pauli::identity(4);
  ComplexMatrix out = commutator_superop(form.H_eff);
  for (int beta = 1; beta < 16; ++beta) {
    for (int gam = 1; gam < 16; ++gam) {
      const Complex k = form.K_coeffs(beta, gam);
      if (k == 0.0) continue;
      const ComplexMatrix gb = b[gam].adjoint() * b[beta];
      out += k * (sandwich_superop(b[beta], b[gam].adjoint()) - 0.5 * sandwich_superop(gb, id) -
                  0.5 * sandwich_superop(id, gb));
    }
  }
  return out;
}

double correlation_block_norm(const ComplexMatrix& K_coeffs) {
  if (K_coeffs.rows() != 16 || K_coeffs.cols() != 16) {
    throw DimensionError("correlation_block_norm: expected a 16x16 coefficient matrix");
  }
  double sum = 0.0;
  for (int beta = 0; beta < 16; ++beta) {
    for (int gam = 0; gam < 16; ++gam) {
      if (beta >= 7 || gam >= 7) sum += std::norm(K_coeffs(beta, gam));
    }
  }
  return std::sqrt(sum);
}

Complex pauli_coefficient(const ComplexMatrix& H, int i, int j) {
  const std::array<ComplexMatrix, 4> s = {pauli::identity(2), pauli::x(), pauli::y(), pauli::z()};
  return (H * kron(s[i], s[j])).trace() / 4.0;
}

}  // namespace postmarkov
