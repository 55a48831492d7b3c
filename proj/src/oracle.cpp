#include "postmarkov/oracle.hpp"

#include <cmath>
#include <sstream>
#include <unsupported/Eigen/MatrixFunctions>

#include "postmarkov/errors.hpp"
#include "postmarkov/kernels.hpp"

namespace postmarkov {

namespace {

// Lindblad term on operators of dimension jump.rows().
ComplexMatrix lindblad_term(const ComplexMatrix& jump, double rate) {
  const ComplexMatrix id = ComplexMatrix::Identity(jump.rows(), jump.cols());
  const ComplexMatrix jdj = jump.adjoint() * jump;
  return rate * (sandwich_superop(jump, jump.adjoint()) - 0.5 * sandwich_superop(jdj, id) -
                 0.5 * sandwich_superop(id, jdj));
}

// Damping of the system factor of a system (x) ancilla operator.
ComplexMatrix system_dissipator(const ModelParams& p) {
  const ComplexMatrix id = pauli::identity(2);
  return lindblad_term(kron(pauli::raising(), id), p.gamma * p.nbar) +
         lindblad_term(kron(pauli::lowering(), id), p.gamma * (p.nbar + 1.0));
}

Complex vec_trace(const ComplexVector& y, int dim) {
  Complex tr = 0.0;
  for (int i = 0; i < dim; ++i) tr += y(i + dim * i);
  return tr;
}

void check_step(double t_max, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw DomainError("integrate_convolution: step must be positive");
  }
  if (!(t_max >= 0.0) || t_max / h > 1e6) {
    std::ostringstream os;
    os << "integrate_convolution: t_max/h = " << t_max / h << " outside [0, 1e6]";
    throw DomainError(os.str());
  }
}

}  // namespace

std::string_view equation_name(Equation eq) {
  switch (eq) {
    case Equation::kEq2: return "eq2";
    case Equation::kEq4: return "eq4";
    case Equation::kEq7: return "eq7";
    case Equation::kEq7Gamma0Reduced: return "eq7_gamma0_reduced";
  }
  return "?";
}

Equation parse_equation(std::string_view name) {
  for (auto eq : {Equation::kEq2, Equation::kEq4, Equation::kEq7, Equation::kEq7Gamma0Reduced}) {
    if (equation_name(eq) == name) return eq;
  }
  throw ConfigError("unknown equation '" + std::string(name) + "'");
}

int equation_dim(Equation eq) {
  return (eq == Equation::kEq4 || eq == Equation::kEq7) ? 4 : 2;
}

double MemoryKernel::operator()(double t) const { return chi * std::exp(-chi * t); }

ConvolutionEquation build_equation(Equation eq, const ModelParams& p) {
  p.validate();
  ConvolutionEquation out;
  out.kernel = MemoryKernel{p.chi};
  out.dim = equation_dim(eq);
  const int n = out.dim * out.dim;
  out.inst = ComplexMatrix::Zero(n, n);
  switch (eq) {
    case Equation::kEq2:
      out.mult = lindblad_term(pauli::raising(), p.gamma * p.nbar) +
                 lindblad_term(pauli::lowering(), p.gamma * (p.nbar + 1.0));
      out.kernel_gen = out.mult;
      break;
    case Equation::kEq4:
      out.inst = commutator_superop(kron(pauli::identity(2), p.J * pauli::z()));
      out.mult = system_dissipator(p);
      out.kernel_gen = out.mult;
      break;
    case Equation::kEq7:
      out.mult = system_dissipator(p) +
                 commutator_superop(kron(pauli::identity(2), p.J * pauli::z()));
      out.kernel_gen = out.mult;
      break;
    case Equation::kEq7Gamma0Reduced:
      out.mult = commutator_superop(p.J * pauli::z());
      out.kernel_gen = out.mult;
      break;
  }
  return out;
}

Trajectory integrate_convolution(const ConvolutionEquation& eq, const DensityMatrix& rho0,
                                 double t_max, double h) {
  check_step(t_max, h);
  if (rho0.dim() != eq.dim) {
    throw DimensionError("integrate_convolution: initial state dimension does not match equation");
  }
  const long steps = std::lround(t_max / h);
  const int n = eq.dim * eq.dim;
  const double chi = eq.kernel.chi;

  // Kernel matrices K_m = k(t_m) exp(kernel_gen t_m), back to back, column-major.
  std::vector<Complex> kmats(static_cast<size_t>(steps + 1) * n * n);
  {
    const ComplexMatrix step_exp = (eq.kernel_gen * h).exp();
    ComplexMatrix e = ComplexMatrix::Identity(n, n);
    for (long m = 0; m <= steps; ++m) {
      Eigen::Map<ComplexMatrix>(kmats.data() + m * n * n, n, n) = eq.kernel(m * h) * e;
      e = e * step_exp;
    }
  }
  const ComplexMatrix inst_exp = (eq.inst * h).exp();
  const ComplexMatrix implicit =
      ComplexMatrix::Identity(n, n) - (0.25 * h * h * chi) * eq.mult;
  const Eigen::PartialPivLU<ComplexMatrix> lu(implicit);

  std::vector<Complex> ys(static_cast<size_t>(steps + 1) * n);
  auto y = [&](long k) { return Eigen::Map<ComplexVector>(ys.data() + k * n, n); };
  y(0) = vec(rho0.matrix());
  ComplexVector integral = ComplexVector::Zero(n);
  ComplexVector hist(n);
  const auto kmat = [&](long m) {
    return Eigen::Map<const ComplexMatrix>(kmats.data() + m * n * n, n, n);
  };

  Trajectory out;
  out.h = h;
  out.times.reserve(steps + 1);
  out.states.reserve(steps + 1);
  out.times.push_back(0.0);
  out.states.push_back(rho0.matrix());

  for (long step = 0; step < steps; ++step) {
    const long next = step + 1;
    // Trapezoidal convolution for the memory integral at t_{next}, minus the
    // implicit m = 0 term.
    hist.setZero();
    kernels::history_sum(
        kernels::HistoryArgs{kmats, ys, n, next, 1, step},
        std::span<Complex>(hist.data(), n));
    hist += 0.5 * kmat(next) * y(0);
    const ComplexVector partial = h * hist;

    const ComplexVector rhs =
        inst_exp * (y(step) + 0.5 * h * (eq.mult * integral)) + 0.5 * h * (eq.mult * partial);
    y(next) = lu.solve(rhs);
    integral = partial + (0.5 * h * chi) * y(next);

    const double drift = std::abs(vec_trace(y(next), eq.dim) - 1.0);
    if (!(drift <= 1e-6)) {
      std::ostringstream os;
      os << "integrate_convolution: trace drift " << drift << " at step " << next << " (t = "
         << next * h << ")";
      throw DivergenceError(os.str(), next);
    }
    out.times.push_back(next * h);
    out.states.push_back(unvec(y(next), eq.dim));
  }
  return out;
}

Trajectory integrate_convolution(Equation eq, const ModelParams& p, const DensityMatrix& rho0,
                                 double t_max, double h) {
  return integrate_convolution(build_equation(eq, p), rho0, t_max, h);
}

double max_trajectory_difference(const Trajectory& a, const Trajectory& b) {
  const long ratio = std::lround(a.h / b.h);
  if (ratio < 1 || std::abs(ratio * b.h - a.h) > 1e-12 * a.h) {
    throw DomainError("max_trajectory_difference: fine step must divide coarse step");
  }
  double worst = 0.0;
  for (size_t k = 0; k < a.states.size(); ++k) {
    const size_t kb = k * ratio;
    if (kb >= b.states.size()) break;
    worst = std::max(worst, (a.states[k] - b.states[kb]).cwiseAbs().maxCoeff());
  }
  return worst;
}

double richardson_error_estimate(Equation eq, const ModelParams& p, const DensityMatrix& rho0,
                                 double t_max, double h) {
  const auto coarse = integrate_convolution(eq, p, rho0, t_max, h);
  const auto fine = integrate_convolution(eq, p, rho0, t_max, 0.5 * h);
  return max_trajectory_difference(coarse, fine);
}

RichardsonStudy richardson_study(Equation eq, const ModelParams& p, const DensityMatrix& rho0,
                                 double t_max, double h) {
  RichardsonStudy s;
  s.coarse = integrate_convolution(eq, p, rho0, t_max, h);
  const auto half = integrate_convolution(eq, p, rho0, t_max, 0.5 * h);
  const auto quarter = integrate_convolution(eq, p, rho0, t_max, 0.25 * h);
  s.estimate_h = max_trajectory_difference(s.coarse, half);
  s.estimate_half = max_trajectory_difference(half, quarter);
  s.ratio = s.estimate_half > 0.0 ? s.estimate_h / s.estimate_half : 0.0;
  return s;
}

}  // namespace postmarkov
