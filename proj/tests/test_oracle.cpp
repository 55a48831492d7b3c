#include "doctest.h"
#include "postmarkov/errors.hpp"
#include "postmarkov/oracle.hpp"
#include "postmarkov/propagators.hpp"
#include "test_support.hpp"

using namespace postmarkov;
using postmarkov::testing::max_abs;

namespace {

const ModelParams kFig1{1.0, 1.0, 1.0, 2.0};

DensityMatrix excited() {
  ComplexVector psi = ComplexVector::Zero(2);
  psi(1) = 1.0;
  return DensityMatrix::pure(psi);
}

double worst_against(const Trajectory& traj, PropagatorKind kind, const ModelParams& p,
                     const DensityMatrix& rho0) {
  double worst = 0.0;
  for (size_t k = 0; k < traj.times.size(); ++k) {
    const auto exact = evolve(rho0, make_propagator(kind, p, traj.times[k]));
    worst = std::max(worst, max_abs(traj.states[k] - exact.matrix()));
  }
  return worst;
}

}  // namespace

TEST_CASE("memory kernel integrates to one") {
  for (double chi : {0.3, 1.0, 7.0}) {
    const MemoryKernel k{chi};
    CHECK(k.integral() == 1.0);
    // Simpson on [0, 40/chi]; the tail beyond is exp(-40).
    const int n = 20000;
    const double b = 40.0 / chi, h = b / n;
    double s = k(0.0) + k(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * k(i * h);
    CHECK(std::abs(s * h / 3.0 - 1.0) < 1e-10);
  }
}

TEST_CASE("z-mode amplitude at t = 1") {
  // Partial fractions at gamma = chi = nbar = 1: xi_z(1) = (3 exp(-1) - exp(-3)) / 2.
  const double frozen = 0.5269256275732315;
  CHECK(std::abs((3 * std::exp(-1.0) - std::exp(-3.0)) / 2 - frozen) < 1e-15);
  const ModelParams p{1.0, 1.0, 1.0, 0.0};
  const auto basis = damping_basis(p);
  const auto rho0 = excited();
  const auto traj = integrate_convolution(Equation::kEq2, p, rho0, 1.0, 1e-3);
  const Complex c0 = decompose(rho0.matrix(), basis)(kIdxZ);
  const Complex c1 = decompose(traj.states.back(), basis)(kIdxZ);
  CHECK(std::abs(c1 / c0 - frozen) < 1e-6);
  CHECK(std::abs(single_pm(p, 1.0).zeta[kIdxZ] - frozen) < 1e-12);
}

TEST_CASE("single-qubit equation matches the closed form") {
  const ModelParams p{1.0, 1.0, 1.0, 0.0};
  const auto traj = integrate_convolution(Equation::kEq2, p, excited(), 3.0, 1e-3);
  CHECK(traj.times.size() == 3001);
  CHECK(worst_against(traj, PropagatorKind::kSinglePm, p, excited()) < 1e-6);
}

TEST_CASE("two-qubit equations against the closed forms") {
  const auto rho0 = testing::fig1_state();
  const auto a = integrate_convolution(Equation::kEq4, kFig1, rho0, 1.0, 2e-3);
  CHECK(worst_against(a, PropagatorKind::kTwoIntuitive, kFig1, rho0) < 5e-6);
  const auto b = integrate_convolution(Equation::kEq7, kFig1, rho0, 1.0, 2e-3);
  CHECK(worst_against(b, PropagatorKind::kTwoSl, kFig1, rho0) < 5e-6);
}

TEST_CASE("both two-qubit equations coincide without the ancilla Hamiltonian") {
  const ModelParams p{1.0, 1.0, 1.0, 0.0};
  std::mt19937_64 rng(5);
  const auto rho0 = testing::random_density(rng, 4);
  const auto a = integrate_convolution(Equation::kEq4, p, rho0, 1.0, 5e-3);
  const auto b = integrate_convolution(Equation::kEq7, p, rho0, 1.0, 5e-3);
  CHECK(max_trajectory_difference(a, b) < 1e-12);
}

TEST_CASE("second-order convergence") {
  const ModelParams p{1.0, 1.0, 1.0, 0.0};
  const auto s = richardson_study(Equation::kEq2, p, excited(), 2.0, 0.02);
  CHECK(s.ratio > 3.5);
  CHECK(s.ratio < 4.5);
  CHECK(s.estimate_h < 1e-3);
}

TEST_CASE("gamma = 0 reduction dephases the ancilla") {
  const ModelParams p{0.0, 0.0, 1.0, 2.0};
  ComplexVector plus = ComplexVector::Ones(2);
  const auto rho0 = DensityMatrix::pure(plus);
  const auto traj = integrate_convolution(Equation::kEq7Gamma0Reduced, p, rho0, 2.0, 1e-3);
  const ComplexMatrix& last = traj.states.back();
  CHECK((last * last).trace().real() < 1.0 - 1e-3);
  // Populations of a sigma_z Hamiltonian are conserved.
  CHECK(std::abs(last(0, 0) - 0.5) < 1e-12);
}

TEST_CASE("trace-violating equation is reported as divergent") {
  ConvolutionEquation eq = build_equation(Equation::kEq2, ModelParams{1.0, 1.0, 1.0, 0.0});
  eq.inst = ComplexMatrix::Identity(4, 4);
  try {
    integrate_convolution(eq, excited(), 1.0, 1e-2);
    FAIL("expected DivergenceError");
  } catch (const DivergenceError& e) {
    CHECK(e.step() >= 1);
  }
}

TEST_CASE("argument validation") {
  const auto rho0 = excited();
  CHECK_THROWS_AS(integrate_convolution(Equation::kEq2, kFig1, rho0, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(integrate_convolution(Equation::kEq2, kFig1, rho0, 1.0, -1e-3), DomainError);
  CHECK_THROWS_AS(integrate_convolution(Equation::kEq2, kFig1, rho0, 2e3, 1e-3), DomainError);
  CHECK_THROWS_AS(integrate_convolution(Equation::kEq4, kFig1, rho0, 1.0, 1e-2), DimensionError);
  CHECK(parse_equation("eq7") == Equation::kEq7);
  CHECK_THROWS_AS(parse_equation("eq9"), ConfigError);
  const auto zero = integrate_convolution(Equation::kEq2, kFig1, rho0, 0.0, 1e-3);
  CHECK(zero.states.size() == 1);
}
