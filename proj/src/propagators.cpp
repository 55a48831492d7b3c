#include "postmarkov/propagators.hpp"

#include <cmath>
#include <sstream>

#include "postmarkov/errors.hpp"

namespace postmarkov {

namespace {

constexpr Complex kI(0.0, 1.0);

// sinh(x)/x, with a Taylor series where the quotient loses accuracy.
Complex sinhc(Complex x) {
  if (std::abs(x) < 1e-2) {
    const Complex x2 = x * x;
    return 1.0 + x2 / 6.0 * (1.0 + x2 / 20.0 * (1.0 + x2 / 42.0));
  }
  return std::sinh(x) / x;
}

void check_time(double t, const char* op) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    std::ostringstream os;
    os << op << ": time must be finite and >= 0, got " << t;
    throw DomainError(os.str());
  }
}

Propagator diagonal_propagator(PropagatorKind kind, const ModelParams& p, double t) {
  Propagator prop{kind, p, t, propagation_basis(p), {}, {}, {}};
  const int n_anc = kind == PropagatorKind::kSinglePm ? 1 : kBasisSize;
  const auto h = h_coefficients(p.J, prop.basis).h;
  prop.zeta.reserve(kBasisSize * n_anc);
  prop.zeta_dot.reserve(kBasisSize * n_anc);
  for (int i = 0; i < kBasisSize; ++i) {
    const double lambda = prop.basis.eigvals[i].real();
    for (int j = 0; j < n_anc; ++j) {
      const double hj = n_anc == 1 ? 0.0 : h[j].real();
      ZetaValue z;
      if (kind == PropagatorKind::kTwoCorrected) {
        const ZetaValue xi = evaluate_zeta(zeta_parts(PropagatorKind::kSinglePm, lambda, 0.0, p.chi), t);
        const Complex phase = std::exp(-kI * hj * t);
        z = {xi.value * phase, (xi.derivative - kI * hj * xi.value) * phase};
      } else {
        z = evaluate_zeta(zeta_parts(kind, lambda, hj, p.chi), t);
      }
      prop.zeta.push_back(z.value);
      prop.zeta_dot.push_back(z.derivative);
    }
  }
  prop.dense = assemble_dense(prop.zeta, prop.basis);
  return prop;
}

}  // namespace

std::string_view kind_name(PropagatorKind kind) {
  switch (kind) {
    case PropagatorKind::kSinglePm: return "single_pm";
    case PropagatorKind::kTwoIntuitive: return "two_intuitive";
    case PropagatorKind::kTwoSl: return "two_sl";
    case PropagatorKind::kTwoCorrected: return "two_corrected";
  }
  return "?";
}

PropagatorKind parse_kind(std::string_view name) {
  for (auto k : {PropagatorKind::kSinglePm, PropagatorKind::kTwoIntuitive, PropagatorKind::kTwoSl,
                 PropagatorKind::kTwoCorrected}) {
    if (kind_name(k) == name) return k;
  }
  throw ConfigError("unknown propagator kind '" + std::string(name) + "'");
}

ZetaParts zeta_parts(PropagatorKind kind, double lambda, double h, double chi) {
  ZetaParts z;
  switch (kind) {
    case PropagatorKind::kSinglePm:
    case PropagatorKind::kTwoIntuitive:
      z.Omega = Complex(chi - lambda, h);
      z.delta_sq = (chi + lambda) * (chi + lambda) - h * h - 2.0 * kI * h * (chi - lambda);
      z.numerator = std::conj(z.Omega);
      break;
    case PropagatorKind::kTwoSl: {
      // Poles at s = mu and s = -chi of 1/(s - mu chi/(chi + s - mu)).
      const Complex mu(lambda, -h);
      z.Omega = chi - mu;
      z.delta_sq = (chi + mu) * (chi + mu);
      z.numerator = z.Omega;
      break;
    }
    case PropagatorKind::kTwoCorrected:
      throw DomainError("zeta_parts: the corrected map is a product, not a single resolvent");
  }
  z.Delta = std::sqrt(z.delta_sq);
  return z;
}

ZetaValue evaluate_zeta(const ZetaParts& z, double t) {
  const Complex x = 0.5 * z.Delta * t;
  // d/dt: exp(-Omega t/2)[(A - Omega)/2 cosh + (Delta^2 - Omega A)/2 * sinh/Delta]
  const Complex c_cosh_dot = 0.5 * (z.numerator - z.Omega);
  const Complex c_sinh_dot = 0.5 * (z.delta_sq - z.Omega * z.numerator);
  if (std::abs(x) <= 1.0) {
    const Complex envelope = std::exp(-0.5 * z.Omega * t);
    const Complex ch = std::cosh(x);
    const Complex sh_over_delta = 0.5 * t * sinhc(x);
    return {envelope * (ch + z.numerator * sh_over_delta),
            envelope * (c_cosh_dot * ch + c_sinh_dot * sh_over_delta)};
  }
  // Split into the two poles so large |Delta t| cannot overflow cosh.
  const Complex up = std::exp(0.5 * (z.Delta - z.Omega) * t);
  const Complex down = std::exp(0.5 * (-z.Delta - z.Omega) * t);
  const Complex a = z.numerator / z.Delta;
  const Complex b = c_sinh_dot / z.Delta;
  return {0.5 * ((1.0 + a) * up + (1.0 - a) * down),
          0.5 * ((c_cosh_dot + b) * up + (c_cosh_dot - b) * down)};
}

ComplexMatrix assemble_dense(const std::vector<Complex>& zeta, const DampingBasis& basis) {
  const bool single = zeta.size() == kBasisSize;
  if (!single && zeta.size() != 16) {
    throw DimensionError("assemble_dense: expected 4 or 16 coefficients");
  }
  const int n = single ? 4 : 16;
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    const ComplexMatrix op = single ? basis.ops[a] : basis.product_op(a);
    const ComplexMatrix dual = single ? basis.duals[a] : basis.product_dual(a);
    // Tr[dual X] = vec(dual^T) . vec(X)
    out += zeta[a] * vec(op) * vec(dual.transpose()).transpose();
  }
  return out;
}

ComplexMatrix Propagator::apply(const ComplexMatrix& rho) const {
  if (rho.rows() != input_dim() || rho.cols() != input_dim()) {
    std::ostringstream os;
    os << kind_name(kind) << ": expected a " << input_dim() << "x" << input_dim() << " state, got "
       << rho.rows() << "x" << rho.cols();
    throw DimensionError(os.str());
  }
  return unvec(dense * vec(rho), input_dim());
}

Propagator single_pm(const ModelParams& p, double t) {
  check_time(t, "single_pm");
  return diagonal_propagator(PropagatorKind::kSinglePm, p, t);
}

Propagator two_intuitive(const ModelParams& p, double t) {
  check_time(t, "two_intuitive");
  return diagonal_propagator(PropagatorKind::kTwoIntuitive, p, t);
}

Propagator two_sl(const ModelParams& p, double t) {
  check_time(t, "two_sl");
  return diagonal_propagator(PropagatorKind::kTwoSl, p, t);
}

Propagator two_corrected(const ModelParams& p, double t) {
  check_time(t, "two_corrected");
  return diagonal_propagator(PropagatorKind::kTwoCorrected, p, t);
}

Propagator make_propagator(PropagatorKind kind, const ModelParams& p, double t) {
  check_time(t, kind_name(kind).data());
  return diagonal_propagator(kind, p, t);
}

DensityMatrix evolve(const DensityMatrix& rho0, const Propagator& prop) {
  return DensityMatrix(prop.apply(rho0.matrix()), 1e-9);
}

}  // namespace postmarkov
