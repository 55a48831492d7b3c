#pragma once

// Experiment harness: configuration, grid sweeps, verdicts and CSV output.

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "postmarkov/damping.hpp"

namespace postmarkov::runner {

enum class Experiment {
  kFig1a,
  kFig1b,
  kFig1c,
  kFig1d,
  kSingleCpScan,
  kCorrectedCpScan,
  kGamma0Check,
  kOracleValidate,
};

std::string_view experiment_name(Experiment e);
Experiment parse_experiment(std::string_view name);  // throws ConfigError
const std::vector<Experiment>& all_experiments();

// Either an inclusive linear range [lo, hi] with `points` samples, or an
// explicit list of values.
struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  int points = 2;
  std::vector<double> explicit_values;

  static Axis range(double lo, double hi, int points);
  static Axis list(std::vector<double> values);
  std::vector<double> values() const;
  // "lo:hi:points" or "v1, v2, ...".
  std::string to_string() const;
  static Axis parse(std::string_view text);  // throws ConfigError
};

struct GridSpec {
  Axis t_tilde = Axis::range(0.0, 3.0, 300);  // fig1a, t~ = J t
  Axis tau = Axis::range(0.0, 5.0, 100);      // fig1b-d, tau = gamma t
  Axis R = Axis::range(0.0, 3.0, 60);         // fig1b-d, R = J / gamma
  // CP scans; scan_tau is gamma t, so t spans [0, 5/gamma].
  Axis scan_gamma = Axis::range(0.1, 10.0, 5);
  Axis scan_nbar = Axis::range(0.0, 3.0, 5);
  Axis scan_chi = Axis::range(0.1, 10.0, 5);
  Axis scan_tau = Axis::range(0.0, 5.0, 5);
  Axis scan_J = Axis::range(0.0, 3.0, 5);
  // gamma0_check output times in units of 1/chi.
  Axis gamma0_t = Axis::range(0.0, 5.0, 501);
};

struct OracleSettings {
  double step = 1e-3;              // in units of 1/gamma (1/chi when gamma = 0)
  double t_max = 1.5;              // in units of 1/gamma
  double richardson_step = 1e-3;   // coarsest step of the h, h/2, h/4 study
  int points = 151;                // rows written per oracle trajectory
};

struct InitialState {
  std::string preset = "fig1";  // fig1 | ground | excited_plus | mixed | explicit
  ComplexMatrix matrix;         // 4x4, filled for every preset
};

InitialState initial_state_preset(std::string_view name);  // throws ConfigError

struct ExperimentConfig {
  Experiment experiment = Experiment::kFig1a;
  ModelParams params;
  GridSpec grid;
  OracleSettings oracle;
  InitialState initial_state = initial_state_preset("fig1");
  std::filesystem::path output_path = "out";
  bool with_oracle = false;
  int threads = 0;  // 0: POSTMARKOV_THREADS or hardware concurrency

  // Throws ConfigError on any violated invariant.
  void validate() const;
};

// Defaults for the named experiment.
ExperimentConfig default_config(Experiment e);

// `key` is "section.key" (or a bare top-level key such as "experiment").
void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value);
// "section.key=value".
void apply_override(ExperimentConfig& cfg, std::string_view assignment);
// Line-oriented "key = value" text with [section] headers; '#' and ';'
// start comments.
void load_config_text(ExperimentConfig& cfg, std::string_view text, std::string_view origin = "");
void load_config_file(ExperimentConfig& cfg, const std::filesystem::path& path);
// Canonical flattened settings, sorted by key; feeding them back through
// apply_setting reproduces the config.
std::vector<std::pair<std::string, std::string>> config_settings(const ExperimentConfig& cfg);

// Worker count: cfg.threads, else POSTMARKOV_THREADS, else hardware concurrency.
int resolve_threads(int requested);
// Calls fn(i) for i in [0, n) on `threads` workers. Exceptions are rethrown
// after all workers stop.
void parallel_for(long n, int threads, const std::function<void(long)>& fn);

enum class Verdict { kPass, kFail, kNotApplicable };
std::string_view verdict_name(Verdict v);

struct VerdictEntry {
  std::string name;
  Verdict verdict = Verdict::kNotApplicable;
  std::string detail;
};

struct Panel {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct ExperimentReport {
  Experiment experiment = Experiment::kFig1a;
  std::vector<Panel> panels;
  std::vector<VerdictEntry> verdicts;
  std::vector<std::pair<std::string, std::string>> provenance;

  bool any_fail() const;
  const Panel* panel(std::string_view name) const;
  const VerdictEntry* verdict(std::string_view name) const;
};

ExperimentReport run(const ExperimentConfig& cfg);
std::string_view code_version();

// Writes <dir>/<panel>.csv for every panel and <dir>/summary.json. Throws
// IoError with the offending path.
void emit_csv(const ExperimentReport& report, const std::filesystem::path& dir);
std::string format_value(double v);  // 12 significant digits
std::string panel_csv(const Panel& panel);
std::string summary_json(const ExperimentReport& report);

}  // namespace postmarkov::runner
