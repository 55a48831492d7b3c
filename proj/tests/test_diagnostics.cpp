#include <algorithm>

#include "doctest.h"
#include "postmarkov/diagnostics.hpp"
#include "postmarkov/errors.hpp"
#include "test_support.hpp"

using namespace postmarkov;
using postmarkov::testing::max_abs;

namespace {

const ModelParams kFig1{1.0, 1.0, 1.0, 2.0};

int conj_index(int i) {
  if (i == kIdxPlus) return kIdxMinus;
  if (i == kIdxMinus) return kIdxPlus;
  return i;
}

// Random rates of a trace- and Hermiticity-preserving generator.
std::vector<Complex> random_rates(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Complex> r(16);
  for (int a = 0; a < 16; ++a) {
    const int b = 4 * conj_index(a / 4) + conj_index(a % 4);
    if (b < a) continue;
    r[a] = b == a ? Complex(g(rng), 0.0) : Complex(g(rng), g(rng));
    r[b] = std::conj(r[a]);
  }
  r[0] = 0.0;
  return r;
}

}  // namespace

TEST_CASE("Choi matrix of simple maps") {
  const auto id = choi(ComplexMatrix::Identity(4, 4), 2);
  CHECK(std::abs(id.matrix.trace() - 2.0) < 1e-14);
  CHECK(std::abs(id.eigenvalues.back() - 2.0) < 1e-12);
  CHECK(std::abs(id.min_eig) < 1e-12);

  // Transpose: swaps vec indices (0,1,2,3) -> (0,2,1,3); not CP.
  ComplexMatrix t = ComplexMatrix::Zero(4, 4);
  t(0, 0) = t(3, 3) = t(1, 2) = t(2, 1) = 1.0;
  CHECK(std::abs(choi(t, 2).min_eig + 1.0) < 1e-12);
  CHECK_THROWS_AS(choi(t, 4), DimensionError);
}

TEST_CASE("Choi trace equals the input dimension") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const ModelParams p{0.1 + 2 * u(rng), 2 * u(rng), 0.1 + 3 * u(rng), 3 * u(rng)};
    const double t = 4 * u(rng);
    for (auto kind : {PropagatorKind::kSinglePm, PropagatorKind::kTwoIntuitive,
                      PropagatorKind::kTwoSl, PropagatorKind::kTwoCorrected}) {
      const auto prop = make_propagator(kind, p, t);
      CHECK(std::abs(choi(prop).matrix.trace() - double(prop.input_dim())) < 1e-9);
    }
  }
}

TEST_CASE("Choi spectrum of the product map is the product of spectra") {
  const ModelParams p{0.8, 0.5, 1.3, 1.1};
  const double t = 0.9;
  const auto single = choi(single_pm(p, t)).matrix;
  ComplexMatrix u = ComplexMatrix::Zero(2, 2);
  u(0, 0) = std::exp(Complex(0, -p.J * t));
  u(1, 1) = std::exp(Complex(0, p.J * t));
  const auto unitary = choi(sandwich_superop(u, u.adjoint()), 2).matrix;
  const auto expected = hermitian_eigenvalues(kron(single, unitary));
  const auto got = choi(two_corrected(p, t)).eigenvalues;
  REQUIRE(got.size() == expected.size());
  for (size_t k = 0; k < got.size(); ++k) CHECK(std::abs(got[k] - expected[k]) < 1e-12);
}

TEST_CASE("time-local generator against finite differences") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const ModelParams p{0.2 + 2 * u(rng), 2 * u(rng), 0.2 + 3 * u(rng), 3 * u(rng)};
    const double t = 0.05 + 2 * u(rng);
    for (auto kind : {PropagatorKind::kSinglePm, PropagatorKind::kTwoIntuitive,
                      PropagatorKind::kTwoSl, PropagatorKind::kTwoCorrected}) {
      const auto g = tcl_generator(kind, p, t);
      const auto fd = finite_difference_generator(kind, p, t);
      CHECK(max_abs(g.superop - fd) < 1e-4 * std::max(1.0, max_abs(fd)));
    }
  }
}

TEST_CASE("TCL generator of a Markovian map is its Liouvillian") {
  const ModelParams p{1.0, 1.0, 1e9, 0.0};
  const auto g = tcl_generator(PropagatorKind::kSinglePm, p, 0.7);
  CHECK(max_abs(g.superop - liouvillian_superop(p)) < 1e-6);
}

TEST_CASE("vanishing mode is reported with its indices") {
  auto prop = two_intuitive(kFig1, 0.5);
  prop.zeta[4 * kIdxZ + kIdxPlus] = 0.0;
  try {
    tcl_generator(prop);
    FAIL("expected SingularMapError");
  } catch (const SingularMapError& e) {
    CHECK(e.i() == kIdxZ);
    CHECK(e.j() == kIdxPlus);
  }
}

TEST_CASE("operator basis is orthonormal") {
  const auto& b = operator_basis();
  for (int x = 0; x < 16; ++x) {
    for (int y = 0; y < 16; ++y) {
      const Complex ip = (b[x].adjoint() * b[y]).trace();
      CHECK(std::abs(ip - (x == y ? 1.0 : 0.0)) < 1e-14);
    }
  }
  CHECK(max_abs(b[9] - 0.5 * kron(pauli::x(), pauli::z())) < 1e-15);
}

TEST_CASE("both coefficient routes agree") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 3; ++trial) {
    const ComplexMatrix s = testing::random_matrix(rng, 16, 16);
    CHECK(max_abs(detail::coefficients_by_trace(s) - detail::coefficients_by_inner_product(s)) <
          1e-10);
  }
  const auto g = tcl_generator(PropagatorKind::kTwoSl, kFig1, 0.4);
  CHECK(max_abs(detail::coefficients_by_trace(g.superop) -
                detail::coefficients_by_inner_product(g.superop)) < 1e-10);
}

TEST_CASE("Lindblad-like form round trip") {
  std::mt19937_64 rng(13);
  const auto basis = damping_basis(kFig1);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = generator_from_rates(random_rates(rng), basis);
    const auto form = lindblad_decompose(g);
    CHECK(hermiticity_defect(form.H_eff) < 1e-10);
    CHECK(max_abs(form.K_coeffs - form.K_coeffs.adjoint()) < 1e-10);
    CHECK(max_abs(lindblad_superop(form) - g.superop) < 1e-8);
  }
  for (auto kind : {PropagatorKind::kTwoIntuitive, PropagatorKind::kTwoSl}) {
    const auto g = tcl_generator(kind, kFig1, 0.5);
    CHECK(max_abs(lindblad_superop(lindblad_decompose(g)) - g.superop) < 1e-8);
  }
  CHECK_THROWS_AS(lindblad_decompose(ComplexMatrix::Identity(4, 4)), DimensionError);
}

TEST_CASE("Markovian dissipator on the system only") {
  const ModelParams p{1.0, 1.0, 1.0, 0.0};
  const ComplexMatrix l = liouvillian_superop(p);
  // L acting on the system factor of column-stacked two-qubit operators.
  ComplexMatrix big = ComplexMatrix::Zero(16, 16);
  for (int c = 0; c < 16; ++c) {
    ComplexMatrix e = ComplexMatrix::Zero(16, 1);
    e(c) = 1.0;
    big.col(c) = vec(testing::apply_on_system(l, unvec(e, 4)));
  }
  const auto form = lindblad_decompose(big);
  CHECK(max_abs(form.H_eff) < 1e-12);
  double outside = 0.0;
  for (int b = 1; b < 16; ++b) {
    for (int g = 1; g < 16; ++g) {
      if (b >= 4 && b <= 6 && g >= 4 && g <= 6) continue;
      outside = std::max(outside, std::abs(form.K_coeffs(b, g)));
    }
  }
  CHECK(outside < 1e-12);
  CHECK(correlation_block_norm(form.K_coeffs) < 1e-10);
}

TEST_CASE("correlation block of product and correlated dynamics") {
  // Independent damping on both qubits: rates add.
  const auto s = single_pm(kFig1, 0.5);
  std::vector<Complex> rates(16);
  for (int a = 0; a < 16; ++a) {
    rates[a] = s.zeta_dot[a / 4] / s.zeta[a / 4] + s.zeta_dot[a % 4] / s.zeta[a % 4];
  }
  const auto product = generator_from_rates(rates, s.basis, 0.5);
  CHECK(correlation_block_norm(lindblad_decompose(product).K_coeffs) < 1e-10);

  const auto corrected = lindblad_decompose(tcl_generator(PropagatorKind::kTwoCorrected, kFig1, 0.5));
  CHECK(correlation_block_norm(corrected.K_coeffs) < 1e-10);
  CHECK(std::abs(pauli_coefficient(corrected.H_eff, 0, 3) - kFig1.J) < 1e-10);

  const ModelParams no_j{1.0, 1.0, 1.0, 0.0};
  const auto flat = lindblad_decompose(tcl_generator(PropagatorKind::kTwoIntuitive, no_j, 0.5));
  CHECK(correlation_block_norm(flat.K_coeffs) < 1e-10);

  const auto corr = lindblad_decompose(tcl_generator(PropagatorKind::kTwoIntuitive, kFig1, 0.5));
  CHECK(correlation_block_norm(corr.K_coeffs) > 1e-3);
  CHECK(std::abs(pauli_coefficient(corr.H_eff, 3, 3)) > 1e-6);
}
