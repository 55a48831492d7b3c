#include "doctest.h"
#include "postmarkov/errors.hpp"
#include "postmarkov/qops.hpp"
#include "test_support.hpp"

using namespace postmarkov;
using postmarkov::testing::max_abs;

TEST_CASE("kron identity and sigma_z") {
  CHECK(max_abs(kron(pauli::identity(2), pauli::identity(2)) - pauli::identity(4)) == 0.0);
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected.diagonal() << 1, 1, -1, -1;
  CHECK(max_abs(kron(pauli::z(), pauli::identity(2)) - expected) == 0.0);
}

TEST_CASE("kron matches index expansion") {
  // out(2i + k, 2j + l) = a(i, j) b(k, l)
  const ComplexMatrix a = pauli::raising();
  const ComplexMatrix b = pauli::lowering();
  ComplexMatrix brute(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) brute(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  const ComplexMatrix got = kron(a, b);
  CHECK(max_abs(got - brute) == 0.0);
  // Only |0 1><1 0| survives.
  CHECK(got(1, 2) == Complex(1.0));
  CHECK(got.cwiseAbs().sum() == doctest::Approx(1.0));
}

TEST_CASE("kron properties on random matrices") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = testing::random_matrix(rng, 2, 2);
    const auto b = testing::random_matrix(rng, 2, 2);
    const auto c = testing::random_matrix(rng, 2, 2);
    const Complex s(0.3, -1.2);
    CHECK(max_abs(kron(kron(a, b), c) - kron(a, kron(b, c))) < 1e-12);
    CHECK(max_abs(kron(a + s * c, b) - (kron(a, b) + s * kron(c, b))) < 1e-12);
    CHECK(std::abs(kron(a, b).trace() - a.trace() * b.trace()) < 1e-12);
    CHECK(max_abs(partial_trace(kron(a, b), Subsystem::kSystem) - b.trace() * a) < 1e-12);
    CHECK(max_abs(partial_trace(kron(a, b), Subsystem::kAncilla) - a.trace() * b) < 1e-12);
  }
}

TEST_CASE("partial_trace examples") {
  std::mt19937_64 rng(3);
  const auto rs = testing::random_density(rng, 2);
  const auto ra = testing::random_density(rng, 2);
  CHECK(max_abs(partial_trace(kron(rs.matrix(), ra.matrix()), Subsystem::kSystem) - rs.matrix()) <
        1e-14);
  CHECK(max_abs(partial_trace(pauli::identity(4) / 4.0, Subsystem::kAncilla) -
                pauli::identity(2) / 2.0) < 1e-15);

  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = bell(3) = 1.0;
  const auto proj = DensityMatrix::pure(bell);
  CHECK(max_abs(partial_trace(proj.matrix(), Subsystem::kSystem) - pauli::identity(2) / 2.0) <
        1e-15);

  const auto m = testing::random_matrix(rng, 4, 4);
  CHECK(std::abs(partial_trace(m, Subsystem::kSystem).trace() - m.trace()) < 1e-12);
  CHECK_THROWS_AS(partial_trace(pauli::identity(2), Subsystem::kSystem), DimensionError);
}

TEST_CASE("hermitian_eigenvalues") {
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 1.0;
  auto e = hermitian_eigenvalues(d);
  CHECK(e[0] == doctest::Approx(0.0));
  CHECK(e[1] == doctest::Approx(1.0));
  e = hermitian_eigenvalues(pauli::x());
  CHECK(e[0] == doctest::Approx(-1.0));
  CHECK(e[1] == doctest::Approx(1.0));
  CHECK_THROWS_AS(hermitian_eigenvalues(ComplexMatrix::Zero(2, 3)), DimensionError);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rho = testing::random_density(rng, 4);
    double sum = 0.0;
    for (double v : hermitian_eigenvalues(rho.matrix())) sum += v;
    CHECK(std::abs(sum - 1.0) < 1e-9);
  }
}

TEST_CASE("trace_distance") {
  ComplexVector zero = ComplexVector::Zero(2), one = ComplexVector::Zero(2);
  zero(0) = 1.0;
  one(1) = 1.0;
  const auto r0 = DensityMatrix::pure(zero);
  const auto r1 = DensityMatrix::pure(one);
  const DensityMatrix mixed(pauli::identity(2) / 2.0);
  CHECK(trace_distance(r0, r0) == doctest::Approx(0.0));
  CHECK(trace_distance(r0, r1) == doctest::Approx(1.0));
  CHECK(trace_distance(r0, mixed) == doctest::Approx(0.5));

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = testing::random_density(rng, 4);
    const auto b = testing::random_density(rng, 4);
    const auto c = testing::random_density(rng, 4);
    CHECK(trace_distance(a, c) <= trace_distance(a, b) + trace_distance(b, c) + 1e-12);
    CHECK(trace_distance(a, b) == doctest::Approx(trace_distance(b, a)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(trace_distance(r0, testing::fig1_state()), DimensionError);
}

TEST_CASE("DensityMatrix validation") {
  CHECK_THROWS_AS(DensityMatrix(pauli::identity(3) / 3.0), DimensionError);
  CHECK_THROWS_AS(DensityMatrix(pauli::identity(2)), DomainError);
  ComplexMatrix skew = pauli::identity(2) / 2.0;
  skew(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityMatrix{skew}, DomainError);

  // Not positive, but a valid instance of the type.
  ComplexMatrix neg = ComplexMatrix::Zero(2, 2);
  neg(0, 0) = 1.2;
  neg(1, 1) = -0.2;
  const DensityMatrix d(neg);
  CHECK_FALSE(d.is_physical());
  CHECK(d.min_eigenvalue() == doctest::Approx(-0.2));
}

TEST_CASE("superoperator conventions") {
  std::mt19937_64 rng(23);
  const auto a = testing::random_matrix(rng, 2, 2);
  const auto b = testing::random_matrix(rng, 2, 2);
  const auto x = testing::random_matrix(rng, 2, 2);
  CHECK(max_abs(unvec(sandwich_superop(a, b) * vec(x), 2) - a * x * b) < 1e-12);
  const auto h = pauli::x();
  CHECK(max_abs(unvec(commutator_superop(h) * vec(x), 2) - Complex(0, -1) * (h * x - x * h)) <
        1e-12);
  // Column stacking.
  CHECK(vec(x)(1) == x(1, 0));
  CHECK(vec(x)(2) == x(0, 1));
}
