#pragma once

// Brute-force quadrature for the memory-kernel master equations. Everything
// here works on dense superoperators built from the equations' definitions;
// nothing touches the damping basis or the closed-form propagators.

#include <string_view>
#include <vector>

#include "postmarkov/damping.hpp"

namespace postmarkov {

enum class Equation {
  kEq2,               // single qubit: d rho/dt = L int k(s) e^{Ls} rho(t-s) ds
  kEq4,               // qubit + ancilla, commutator added outside the memory integral
  kEq7,               // qubit + ancilla, commutator inside the memory construction
  kEq7Gamma0Reduced,  // ancilla alone, gamma = 0 reduction of kEq7
};

std::string_view equation_name(Equation eq);
Equation parse_equation(std::string_view name);  // throws ConfigError
// State dimension the equation acts on (2 or 4).
int equation_dim(Equation eq);

struct MemoryKernel {
  double chi;
  double operator()(double t) const;
  // Closed-form integral over [0, inf), equal to 1.
  double integral() const { return 1.0; }
};

struct Trajectory {
  double h = 0.0;
  std::vector<double> times;
  std::vector<ComplexMatrix> states;
};

// The equation in the form
//   dy/dt = inst y + mult int_0^t k(s) exp(kernel_gen s) y(t - s) ds
// on column-stacked states.
struct ConvolutionEquation {
  int dim = 0;
  ComplexMatrix inst;
  ComplexMatrix mult;
  ComplexMatrix kernel_gen;
  MemoryKernel kernel{1.0};
};

ConvolutionEquation build_equation(Equation eq, const ModelParams& p);

inline constexpr double kDefaultOracleStep = 1e-3;
inline constexpr double kDefaultOracleTmax = 10.0;

// Second-order solver: trapezoidal convolution quadrature of the memory
// integral over the full history, an exponential trapezoidal step for the
// time derivative. Throws DomainError for h <= 0 or t_max/h > 1e6, and
// DivergenceError when the trace drifts more than 1e-6 from 1.
Trajectory integrate_convolution(Equation eq, const ModelParams& p, const DensityMatrix& rho0,
                                 double t_max, double h);
Trajectory integrate_convolution(const ConvolutionEquation& eq, const DensityMatrix& rho0,
                                 double t_max, double h);

// Largest entry-wise difference between two trajectories at their common
// grid times (b's step must divide a's).
double max_trajectory_difference(const Trajectory& a, const Trajectory& b);

// max |y_h - y_{h/2}| over the coarse grid.
double richardson_error_estimate(Equation eq, const ModelParams& p, const DensityMatrix& rho0,
                                 double t_max, double h);

struct RichardsonStudy {
  double estimate_h = 0.0;     // |y_h - y_{h/2}|
  double estimate_half = 0.0;  // |y_{h/2} - y_{h/4}|
  double ratio = 0.0;          // estimate_h / estimate_half, ~4 for order 2
  Trajectory coarse;           // the run at step h
};

RichardsonStudy richardson_study(Equation eq, const ModelParams& p, const DensityMatrix& rho0,
                                 double t_max, double h);

}  // namespace postmarkov
