#include <algorithm>
#include <cmath>
#include <sstream>

#include "postmarkov/diagnostics.hpp"
#include "postmarkov/errors.hpp"
#include "postmarkov/kernels.hpp"
#include "postmarkov/oracle.hpp"
#include "postmarkov/runner.hpp"

#ifndef POSTMARKOV_VERSION
#define POSTMARKOV_VERSION "unknown"
#endif

namespace postmarkov::runner {

namespace {

// Thresholds shared with the acceptance suite.
constexpr double kViolation = -1e-8;
constexpr double kStrongViolation = -1e-6;
constexpr double kNonNegative = -1e-9;
constexpr double kPreservation = 1e-9;
constexpr double kConsistency = 1e-8;
constexpr double kOracleAgreement = 1e-6;
constexpr double kPurityDrop = 1e-4;
constexpr double kUnitaryPurity = 1e-10;

struct Defects {
  double trace = 0.0;
  double herm = 0.0;

  void observe(const ComplexMatrix& rho) {
    trace = std::max(trace, std::abs(rho.trace() - 1.0));
    herm = std::max(herm, hermiticity_defect(rho));
  }
  void merge(const Defects& o) {
    trace = std::max(trace, o.trace);
    herm = std::max(herm, o.herm);
  }
};

std::string fmt(double v) { return format_value(v); }

VerdictEntry preservation_verdict(const Defects& d) {
  VerdictEntry v{"trace_hermiticity", Verdict::kPass, ""};
  v.detail = "max |Tr - 1| = " + fmt(d.trace) + ", max Hermiticity defect = " + fmt(d.herm);
  if (!(d.trace <= kPreservation && d.herm <= kPreservation)) v.verdict = Verdict::kFail;
  return v;
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

bool fig1a_reference(const ExperimentConfig& cfg) {
  const auto& p = cfg.params;
  return close(p.gamma, 1.0) && close(p.nbar, 1.0) && close(p.chi, 1.0) && close(p.J, 2.0) &&
         cfg.initial_state.preset == "fig1";
}

// Reference set of the (tau, R) sweeps: nbar = 1 and chi = gamma.
bool sweep_reference(const ExperimentConfig& cfg, bool state_matters) {
  const auto& p = cfg.params;
  return close(p.nbar, 1.0) && close(p.chi, p.gamma) &&
         (!state_matters || cfg.initial_state.preset == "fig1");
}

VerdictEntry not_applicable(std::string name, std::string why) {
  return VerdictEntry{std::move(name), Verdict::kNotApplicable, std::move(why)};
}

struct OracleComparison {
  Trajectory traj;
  std::vector<double> errors;  // per step
  double max_error = 0.0;
  Defects defects;
};

OracleComparison compare_with_oracle(Equation eq, PropagatorKind kind, const ModelParams& p,
                                     const DensityMatrix& rho0, double t_max, double h) {
  OracleComparison c;
  c.traj = integrate_convolution(eq, p, rho0, t_max, h);
  c.errors.resize(c.traj.times.size());
  for (size_t k = 0; k < c.traj.times.size(); ++k) {
    const auto exact = evolve(rho0, make_propagator(kind, p, c.traj.times[k]));
    c.defects.observe(exact.matrix());
    c.errors[k] = (c.traj.states[k] - exact.matrix()).cwiseAbs().maxCoeff();
    c.max_error = std::max(c.max_error, c.errors[k]);
  }
  return c;
}

VerdictEntry oracle_verdict(const std::vector<std::pair<std::string, double>>& errors, double h) {
  VerdictEntry v{"oracle_agreement", Verdict::kPass, ""};
  std::ostringstream os;
  os << "h = " << fmt(h);
  for (const auto& [name, err] : errors) {
    os << ", " << name << " max error " << fmt(err);
    if (!(err < kOracleAgreement)) v.verdict = Verdict::kFail;
  }
  v.detail = os.str();
  return v;
}

// With --with-oracle: one quadrature run of `eq` at `p`, max-norm against the
// closed form of `kind`. The window is capped at oracle.t_max, the range the
// step size is certified for.
VerdictEntry optional_oracle(const ExperimentConfig& cfg, Equation eq, PropagatorKind kind,
                             const ModelParams& p, double t_max, Defects& defects) {
  const double rate = p.gamma > 0.0 ? p.gamma : p.chi;
  const double h = cfg.oracle.step / rate;
  t_max = std::min(t_max, cfg.oracle.t_max / rate);
  const DensityMatrix rho0(cfg.initial_state.matrix);
  const auto c = compare_with_oracle(eq, kind, p, rho0, t_max, h);
  defects.merge(c.defects);
  auto v = oracle_verdict({{std::string(kind_name(kind)), c.max_error}}, h);
  v.detail += ", J = " + fmt(p.J) + ", t_max = " + fmt(t_max);
  return v;
}

ExperimentReport run_fig1a(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  const auto& p = cfg.params;
  const DensityMatrix rho0(cfg.initial_state.matrix);
  const ComplexMatrix rs0 = partial_trace(rho0.matrix(), Subsystem::kSystem);
  const ComplexMatrix ra0 = partial_trace(rho0.matrix(), Subsystem::kAncilla);
  const bool product = (kron(rs0, ra0) - rho0.matrix()).cwiseAbs().maxCoeff() < 1e-12;

  const auto tt = cfg.grid.t_tilde.values();
  const long n = static_cast<long>(tt.size());
  Panel panel{"fig1a", {"t_tilde", "trace_distance", "min_eig"}, {}};
  panel.rows.resize(n);
  std::vector<Defects> defects(n);
  std::vector<double> consistency(n, 0.0);
  parallel_for(n, resolve_threads(cfg.threads), [&](long k) {
    const double t = tt[k] / std::abs(p.J);
    const auto rho = evolve(rho0, two_intuitive(p, t));
    defects[k].observe(rho.matrix());
    const ComplexMatrix rs = single_pm(p, t).apply(rs0);
    ComplexMatrix u = ComplexMatrix::Zero(2, 2);
    u(0, 0) = std::exp(Complex(0.0, -p.J * t));
    u(1, 1) = std::exp(Complex(0.0, p.J * t));
    const ComplexMatrix ra = u * ra0 * u.adjoint();
    const DensityMatrix reference(kron(rs, ra), 1e-9);
    panel.rows[k] = {tt[k], trace_distance(rho, reference), rho.min_eigenvalue()};
    consistency[k] =
        std::max((partial_trace(rho.matrix(), Subsystem::kSystem) - rs).cwiseAbs().maxCoeff(),
                 (partial_trace(rho.matrix(), Subsystem::kAncilla) - ra).cwiseAbs().maxCoeff());
  });

  Defects all;
  for (const auto& d : defects) all.merge(d);

  if (!fig1a_reference(cfg)) {
    rep.verdicts.push_back(not_applicable("intuitive_positivity_violation",
                                          "parameters or initial state differ from the reference set"));
  } else {
    long window = 0, negative = 0;
    for (const auto& row : panel.rows) {
      if (row[0] > 0.05 && row[0] <= 3.0) {
        ++window;
        if (row[2] < kStrongViolation) ++negative;
      }
    }
    if (window == 0) {
      rep.verdicts.push_back(not_applicable("intuitive_positivity_violation",
                                            "no samples with t_tilde in (0.05, 3]"));
    } else {
      const bool ok = negative >= 0.9 * window;
      rep.verdicts.push_back({"intuitive_positivity_violation", ok ? Verdict::kPass : Verdict::kFail,
                              std::to_string(negative) + " of " + std::to_string(window) +
                                  " samples in (0.05, 3] have min_eig < -1e-6"});
    }
  }

  if (!product) {
    rep.verdicts.push_back(not_applicable("partial_trace_consistency", "initial state is not a product"));
  } else {
    const double worst = n ? *std::max_element(consistency.begin(), consistency.end()) : 0.0;
    rep.verdicts.push_back({"partial_trace_consistency",
                            worst <= kConsistency ? Verdict::kPass : Verdict::kFail,
                            "max deviation of the reduced states " + fmt(worst)});
  }
  if (cfg.with_oracle && n > 0) {
    const double t_max = *std::max_element(tt.begin(), tt.end()) / std::abs(p.J);
    rep.verdicts.push_back(
        optional_oracle(cfg, Equation::kEq4, PropagatorKind::kTwoIntuitive, p, t_max, all));
  }
  rep.verdicts.push_back(preservation_verdict(all));
  rep.panels.push_back(std::move(panel));
  return rep;
}

enum class SweepQuantity { kStateMinEig, kChoiMinEig };

ExperimentReport run_fig1_sweep(const ExperimentConfig& cfg, PropagatorKind kind,
                                SweepQuantity quantity, const std::string& panel_name,
                                const std::string& verdict_name) {
  ExperimentReport rep;
  const auto& p = cfg.params;
  const DensityMatrix rho0(cfg.initial_state.matrix);
  const auto taus = cfg.grid.tau.values();
  const auto Rs = cfg.grid.R.values();
  const long nt = static_cast<long>(taus.size());
  const long n = nt * static_cast<long>(Rs.size());
  const bool choi_panel = quantity == SweepQuantity::kChoiMinEig;

  Panel panel{panel_name, {"tau", "R", choi_panel ? "choi_min_eig" : "min_eig"}, {}};
  panel.rows.resize(n);
  std::vector<Defects> defects(n);
  parallel_for(n, resolve_threads(cfg.threads), [&](long k) {
    const double tau = taus[k % nt], R = Rs[k / nt];
    ModelParams q = p;
    q.J = R * p.gamma;
    const auto prop = make_propagator(kind, q, tau / p.gamma);
    double value;
    if (choi_panel) {
      value = choi(prop).min_eig;
    } else {
      const auto rho = evolve(rho0, prop);
      defects[k].observe(rho.matrix());
      value = rho.min_eigenvalue();
    }
    panel.rows[k] = {tau, R, value};
  });

  if (!sweep_reference(cfg, !choi_panel)) {
    rep.verdicts.push_back(not_applicable(verdict_name, "requires nbar = 1, chi = gamma" +
                                                            std::string(choi_panel ? "" : " and the fig1 state")));
  } else {
    std::vector<std::string> failures;
    for (size_t r = 0; r < Rs.size(); ++r) {
      double lowest = 0.0;
      bool violated = false;
      for (long i = 0; i < nt; ++i) {
        const auto& row = panel.rows[r * nt + i];
        lowest = std::min(lowest, row[2]);
        if (row[0] > 0.0 && row[2] < kViolation) violated = true;
      }
      if (Rs[r] == 0.0 ? lowest < kNonNegative : !violated) {
        failures.push_back("R=" + fmt(Rs[r]) + " (lowest " + fmt(lowest) + ")");
      }
    }
    VerdictEntry v{verdict_name, failures.empty() ? Verdict::kPass : Verdict::kFail, ""};
    if (failures.empty()) {
      v.detail = "every R != 0 violates below -1e-8, R = 0 stays >= -1e-9";
    } else {
      v.detail = std::to_string(failures.size()) + " R value(s) with unexpected sign:";
      for (size_t i = 0; i < std::min<size_t>(failures.size(), 4); ++i) v.detail += " " + failures[i];
      if (failures.size() > 4) v.detail += " ...";
    }
    rep.verdicts.push_back(std::move(v));
  }

  Defects all;
  for (const auto& d : defects) all.merge(d);
  if (cfg.with_oracle && !Rs.empty() && !taus.empty()) {
    ModelParams q = p;
    q.J = *std::max_element(Rs.begin(), Rs.end(),
                            [](double a, double b) { return std::abs(a) < std::abs(b); }) *
          p.gamma;
    const double t_max = *std::max_element(taus.begin(), taus.end()) / p.gamma;
    const auto eq = kind == PropagatorKind::kTwoSl ? Equation::kEq7 : Equation::kEq4;
    rep.verdicts.push_back(optional_oracle(cfg, eq, kind, q, t_max, all));
  }
  if (!choi_panel || cfg.with_oracle) rep.verdicts.push_back(preservation_verdict(all));
  rep.panels.push_back(std::move(panel));
  return rep;
}

ExperimentReport run_cp_scan(const ExperimentConfig& cfg, bool corrected) {
  ExperimentReport rep;
  const auto& g = cfg.grid;
  const auto gammas = g.scan_gamma.values(), nbars = g.scan_nbar.values(),
             chis = g.scan_chi.values(), taus = g.scan_tau.values();
  const auto Js = corrected ? g.scan_J.values() : std::vector<double>{0.0};
  const long sizes[] = {static_cast<long>(gammas.size()), static_cast<long>(nbars.size()),
                        static_cast<long>(chis.size()), static_cast<long>(Js.size()),
                        static_cast<long>(taus.size())};
  long n = 1;
  for (long s : sizes) n *= s;

  Panel panel{corrected ? "corrected_cp_scan" : "single_cp_scan", {}, {}};
  panel.columns = corrected ? std::vector<std::string>{"gamma", "nbar", "chi", "J", "t", "choi_min_eig"}
                            : std::vector<std::string>{"gamma", "nbar", "chi", "t", "choi_min_eig"};
  panel.rows.resize(n);
  parallel_for(n, resolve_threads(cfg.threads), [&](long k) {
    long idx[5];
    long rest = k;
    for (int d = 4; d >= 0; --d) {
      idx[d] = rest % sizes[d];
      rest /= sizes[d];
    }
    const ModelParams q{gammas[idx[0]], nbars[idx[1]], chis[idx[2]], Js[idx[3]]};
    const double t = taus[idx[4]] / q.gamma;
    const double m = choi(make_propagator(corrected ? PropagatorKind::kTwoCorrected
                                                    : PropagatorKind::kSinglePm,
                                          q, t))
                         .min_eig;
    if (corrected) {
      panel.rows[k] = {q.gamma, q.nbar, q.chi, q.J, t, m};
    } else {
      panel.rows[k] = {q.gamma, q.nbar, q.chi, t, m};
    }
  });

  double lowest = 0.0;
  for (const auto& row : panel.rows) lowest = std::min(lowest, row.back());
  rep.verdicts.push_back({corrected ? "corrected_cp" : "single_cp",
                          lowest >= kNonNegative ? Verdict::kPass : Verdict::kFail,
                          "lowest Choi eigenvalue " + fmt(lowest) + " over " + std::to_string(n) +
                              " points"});
  rep.panels.push_back(std::move(panel));
  return rep;
}

ExperimentReport run_gamma0(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  ModelParams p = cfg.params;
  p.gamma = 0.0;
  const DensityMatrix rho_a0(partial_trace(cfg.initial_state.matrix, Subsystem::kAncilla));
  const auto ts = cfg.grid.gamma0_t.values();  // units of 1/chi
  const double h = cfg.oracle.step / p.chi;
  const double t_max = ts.empty() ? 0.0 : *std::max_element(ts.begin(), ts.end()) / p.chi;
  const auto traj = integrate_convolution(Equation::kEq7Gamma0Reduced, p, rho_a0, t_max, h);
  const double p0 = rho_a0.purity();

  Panel panel{"gamma0_check", {"t", "purity", "purity_von_neumann"}, {}};
  double lowest = p0, vn_worst = 0.0;
  for (const auto& step : traj.states) {
    lowest = std::min(lowest, (step * step).trace().real());
  }
  for (double tc : ts) {
    const double t = tc / p.chi;
    const long k = std::min<long>(std::lround(t / h), static_cast<long>(traj.states.size()) - 1);
    const ComplexMatrix& rho = traj.states[k];
    ComplexMatrix u = ComplexMatrix::Zero(2, 2);
    u(0, 0) = std::exp(Complex(0.0, -p.J * t));
    u(1, 1) = std::exp(Complex(0.0, p.J * t));
    const DensityMatrix vn(u * rho_a0.matrix() * u.adjoint());
    vn_worst = std::max(vn_worst, std::abs(vn.purity() - p0));
    panel.rows.push_back({t, (rho * rho).trace().real(), vn.purity()});
  }

  if (p.J == 0.0 || std::abs(rho_a0.matrix()(0, 1)) < 1e-12) {
    rep.verdicts.push_back(not_applicable("gamma0_purity_loss",
                                          "no ancilla coherence to dephase (J = 0 or diagonal state)"));
  } else {
    const bool ok = lowest < p0 - kPurityDrop && vn_worst <= kUnitaryPurity;
    rep.verdicts.push_back({"gamma0_purity_loss", ok ? Verdict::kPass : Verdict::kFail,
                            "lowest purity " + fmt(lowest) + " from " + fmt(p0) +
                                ", von Neumann purity deviation " + fmt(vn_worst)});
  }
  rep.panels.push_back(std::move(panel));
  return rep;
}

ExperimentReport run_oracle_validate(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  const auto& p = cfg.params;
  const DensityMatrix rho0(cfg.initial_state.matrix);
  const DensityMatrix rho_s0(partial_trace(rho0.matrix(), Subsystem::kSystem));
  const double h = cfg.oracle.step / p.gamma;
  const double t_max = cfg.oracle.t_max / p.gamma;

  struct Case {
    Equation eq;
    PropagatorKind kind;
    const DensityMatrix* rho0;
  };
  const Case cases[] = {{Equation::kEq2, PropagatorKind::kSinglePm, &rho_s0},
                        {Equation::kEq4, PropagatorKind::kTwoIntuitive, &rho0},
                        {Equation::kEq7, PropagatorKind::kTwoSl, &rho0}};
  std::vector<OracleComparison> comps(3);
  std::vector<RichardsonStudy> studies(3);
  parallel_for(6, resolve_threads(cfg.threads), [&](long k) {
    const auto& c = cases[k % 3];
    if (k < 3) {
      comps[k] = compare_with_oracle(c.eq, c.kind, p, *c.rho0, t_max, h);
    } else {
      studies[k - 3] = richardson_study(c.eq, p, *c.rho0, t_max, cfg.oracle.richardson_step / p.gamma);
    }
  });

  Panel traj{"oracle_trajectories", {"t", "single_pm_err", "two_intuitive_err", "two_sl_err"}, {}};
  const long steps = static_cast<long>(comps[0].traj.times.size());
  for (int i = 0; i < cfg.oracle.points; ++i) {
    const long k = std::lround(static_cast<double>(i) * (steps - 1) / (cfg.oracle.points - 1));
    traj.rows.push_back({comps[0].traj.times[k], comps[0].errors[k], comps[1].errors[k],
                         comps[2].errors[k]});
  }
  rep.panels.push_back(std::move(traj));

  Defects all;
  std::vector<std::pair<std::string, double>> errors;
  VerdictEntry order{"richardson_order", Verdict::kPass, ""};
  for (int i = 0; i < 3; ++i) {
    all.merge(comps[i].defects);
    errors.emplace_back(std::string(kind_name(cases[i].kind)), comps[i].max_error);
    const auto& s = studies[i];
    const double hr = s.coarse.h;
    rep.panels.push_back(Panel{"richardson_" + std::string(equation_name(cases[i].eq)),
                               {"h", "max_diff_to_half_step"},
                               {{hr, s.estimate_h}, {0.5 * hr, s.estimate_half}}});
    if (!(s.ratio >= 3.5 && s.ratio <= 4.5)) order.verdict = Verdict::kFail;
    order.detail += (i ? ", " : "") + std::string(equation_name(cases[i].eq)) + " ratio " + fmt(s.ratio);
  }
  rep.verdicts.push_back(oracle_verdict(errors, h));
  rep.verdicts.push_back(std::move(order));
  rep.verdicts.push_back(preservation_verdict(all));
  return rep;
}

}  // namespace

std::string_view code_version() { return POSTMARKOV_VERSION; }

ExperimentReport run(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentReport rep;
  switch (cfg.experiment) {
    case Experiment::kFig1a:
      rep = run_fig1a(cfg);
      break;
    case Experiment::kFig1b:
      rep = run_fig1_sweep(cfg, PropagatorKind::kTwoIntuitive, SweepQuantity::kStateMinEig, "fig1b",
                           "intuitive_violation_for_small_J");
      break;
    case Experiment::kFig1c:
      rep = run_fig1_sweep(cfg, PropagatorKind::kTwoIntuitive, SweepQuantity::kChoiMinEig, "fig1c",
                           "intuitive_cp_violation_iff_J");
      break;
    case Experiment::kFig1d:
      rep = run_fig1_sweep(cfg, PropagatorKind::kTwoSl, SweepQuantity::kStateMinEig, "fig1d",
                           "sl_positivity_violation");
      break;
    case Experiment::kSingleCpScan:
      rep = run_cp_scan(cfg, false);
      break;
    case Experiment::kCorrectedCpScan:
      rep = run_cp_scan(cfg, true);
      break;
    case Experiment::kGamma0Check:
      rep = run_gamma0(cfg);
      break;
    case Experiment::kOracleValidate:
      rep = run_oracle_validate(cfg);
      break;
  }
  rep.experiment = cfg.experiment;
  rep.provenance = config_settings(cfg);
  rep.provenance.emplace_back("code.version", std::string(code_version()));
  rep.provenance.emplace_back("runtime.kernel_backend",
                              std::string(kernels::backend_name(kernels::active_backend())));
  return rep;
}

}  // namespace postmarkov::runner
