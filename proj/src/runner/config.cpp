#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "postmarkov/errors.hpp"
#include "postmarkov/runner.hpp"

namespace postmarkov::runner {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ConfigError(std::string(key) + ": '" + std::string(text) + "' is not a finite number");
  }
  return v;
}

int parse_int(std::string_view key, std::string_view text) {
  text = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(std::string(key) + ": '" + std::string(text) + "' is not an integer");
  }
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError(std::string(key) + ": '" + std::string(text) + "' is not a boolean");
}

// Numbers separated by commas and/or whitespace.
std::vector<double> parse_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  size_t pos = 0;
  while (pos < text.size()) {
    const auto end = text.find_first_of(", \t", pos);
    const auto token = trim(text.substr(pos, end == std::string_view::npos ? end : end - pos));
    if (!token.empty()) out.push_back(parse_double(key, token));
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += format_value(v[i]);
  }
  return s;
}

struct AxisField {
  const char* key;
  Axis GridSpec::*member;
};

constexpr AxisField kAxes[] = {
    {"grid.t_tilde", &GridSpec::t_tilde},       {"grid.tau", &GridSpec::tau},
    {"grid.R", &GridSpec::R},                   {"grid.scan_gamma", &GridSpec::scan_gamma},
    {"grid.scan_nbar", &GridSpec::scan_nbar},   {"grid.scan_chi", &GridSpec::scan_chi},
    {"grid.scan_tau", &GridSpec::scan_tau},     {"grid.scan_J", &GridSpec::scan_J},
    {"grid.gamma0_t", &GridSpec::gamma0_t},
};

void check_axis(const char* key, const Axis& a, double min_value, bool strict) {
  const auto vals = a.values();
  if (a.explicit_values.empty() && a.points < 2) {
    throw ConfigError(std::string(key) + ": a range needs at least 2 points");
  }
  if (a.explicit_values.empty() && !(a.lo <= a.hi)) {
    throw ConfigError(std::string(key) + ": range lower bound exceeds upper bound");
  }
  for (double v : vals) {
    if (!std::isfinite(v) || v < min_value || (strict && v == min_value)) {
      std::ostringstream os;
      os << key << ": value " << v << " must be " << (strict ? "> " : ">= ") << min_value;
      throw ConfigError(os.str());
    }
  }
}

}  // namespace

std::string_view experiment_name(Experiment e) {
  switch (e) {
    case Experiment::kFig1a: return "fig1a";
    case Experiment::kFig1b: return "fig1b";
    case Experiment::kFig1c: return "fig1c";
    case Experiment::kFig1d: return "fig1d";
    case Experiment::kSingleCpScan: return "single_cp_scan";
    case Experiment::kCorrectedCpScan: return "corrected_cp_scan";
    case Experiment::kGamma0Check: return "gamma0_check";
    case Experiment::kOracleValidate: return "oracle_validate";
  }
  return "?";
}

const std::vector<Experiment>& all_experiments() {
  static const std::vector<Experiment> all = {
      Experiment::kFig1a,        Experiment::kFig1b,           Experiment::kFig1c,
      Experiment::kFig1d,        Experiment::kSingleCpScan,    Experiment::kCorrectedCpScan,
      Experiment::kGamma0Check,  Experiment::kOracleValidate,
  };
  return all;
}

Experiment parse_experiment(std::string_view name) {
  for (auto e : all_experiments()) {
    if (experiment_name(e) == name) return e;
  }
  throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

Axis Axis::range(double lo, double hi, int points) {
  Axis a;
  a.lo = lo;
  a.hi = hi;
  a.points = points;
  return a;
}

Axis Axis::list(std::vector<double> values) {
  Axis a;
  a.explicit_values = std::move(values);
  return a;
}

std::vector<double> Axis::values() const {
  if (!explicit_values.empty()) return explicit_values;
  std::vector<double> v(std::max(points, 0));
  for (int i = 0; i < points; ++i) {
    // Endpoints exact; interior points from the lower end.
    v[i] = i == points - 1 ? hi : lo + (hi - lo) * i / (points - 1);
  }
  return v;
}

std::string Axis::to_string() const {
  if (!explicit_values.empty()) return join(explicit_values);
  return format_value(lo) + ":" + format_value(hi) + ":" + std::to_string(points);
}

Axis Axis::parse(std::string_view text) {
  text = trim(text);
  if (text.find(':') != std::string_view::npos) {
    const auto a = text.find(':');
    const auto b = text.find(':', a + 1);
    if (b == std::string_view::npos) throw ConfigError("axis '" + std::string(text) + "' is not lo:hi:points");
    return range(parse_double("axis", text.substr(0, a)),
                 parse_double("axis", text.substr(a + 1, b - a - 1)),
                 parse_int("axis", text.substr(b + 1)));
  }
  auto vals = parse_list("axis", text);
  if (vals.empty()) throw ConfigError("axis has no values");
  return list(std::move(vals));
}

InitialState initial_state_preset(std::string_view name) {
  InitialState s;
  s.preset = std::string(name);
  ComplexVector psi = ComplexVector::Zero(4);
  if (name == "fig1") {
    // |0>_S (x) (|0> + |1>)_A / sqrt(2)
    psi(0) = psi(1) = 1.0 / std::sqrt(2.0);
  } else if (name == "ground") {
    psi(0) = 1.0;
  } else if (name == "excited_plus") {
    psi(2) = psi(3) = 1.0 / std::sqrt(2.0);
  } else if (name == "mixed") {
    s.matrix = 0.25 * ComplexMatrix::Identity(4, 4);
    return s;
  } else {
    throw ConfigError("unknown initial_state preset '" + std::string(name) + "'");
  }
  s.matrix = psi * psi.adjoint();
  return s;
}

void ExperimentConfig::validate() const {
  try {
    params.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("params: ") + e.what());
  }
  check_axis("grid.t_tilde", grid.t_tilde, 0.0, false);
  check_axis("grid.tau", grid.tau, 0.0, false);
  check_axis("grid.R", grid.R, -1e300, false);
  check_axis("grid.scan_gamma", grid.scan_gamma, 0.0, true);
  check_axis("grid.scan_nbar", grid.scan_nbar, 0.0, false);
  check_axis("grid.scan_chi", grid.scan_chi, 0.0, true);
  check_axis("grid.scan_tau", grid.scan_tau, 0.0, false);
  check_axis("grid.scan_J", grid.scan_J, -1e300, false);
  check_axis("grid.gamma0_t", grid.gamma0_t, 0.0, false);

  if (!(oracle.step > 0.0) || !(oracle.t_max > 0.0) || !(oracle.richardson_step > 0.0)) {
    throw ConfigError("oracle: step, t_max and richardson_step must be positive");
  }
  if (oracle.t_max / oracle.step > 1e6) throw ConfigError("oracle: t_max/step exceeds 1e6");
  if (oracle.points < 2) throw ConfigError("oracle.points must be at least 2");
  if (threads < 0) throw ConfigError("runtime.threads must be >= 0");

  if (initial_state.matrix.rows() != 4 || initial_state.matrix.cols() != 4) {
    throw ConfigError("initial_state: expected a 4x4 matrix");
  }
  try {
    DensityMatrix check(initial_state.matrix);
    if (!check.is_physical()) throw ConfigError("initial_state: matrix is not positive semidefinite");
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("initial_state: ") + e.what());
  }

  const bool needs_gamma = experiment == Experiment::kFig1b || experiment == Experiment::kFig1c ||
                           experiment == Experiment::kFig1d ||
                           experiment == Experiment::kOracleValidate;
  if (needs_gamma && !(params.gamma > 0.0)) {
    throw ConfigError(std::string(experiment_name(experiment)) + " needs params.gamma > 0");
  }
  if (experiment == Experiment::kFig1a && params.J == 0.0) {
    throw ConfigError("fig1a is parametrised by J t and needs params.J != 0");
  }
}

ExperimentConfig default_config(Experiment e) {
  ExperimentConfig cfg;
  cfg.experiment = e;
  cfg.output_path = std::filesystem::path("out") / std::string(experiment_name(e));
  return cfg;
}

void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "experiment") {
    cfg.experiment = parse_experiment(value);
  } else if (key == "params.gamma") {
    cfg.params.gamma = parse_double(key, value);
  } else if (key == "params.nbar") {
    cfg.params.nbar = parse_double(key, value);
  } else if (key == "params.chi") {
    cfg.params.chi = parse_double(key, value);
  } else if (key == "params.J") {
    cfg.params.J = parse_double(key, value);
  } else if (key == "oracle.step") {
    cfg.oracle.step = parse_double(key, value);
  } else if (key == "oracle.t_max") {
    cfg.oracle.t_max = parse_double(key, value);
  } else if (key == "oracle.richardson_step") {
    cfg.oracle.richardson_step = parse_double(key, value);
  } else if (key == "oracle.points") {
    cfg.oracle.points = parse_int(key, value);
  } else if (key == "oracle.enabled") {
    cfg.with_oracle = parse_bool(key, value);
  } else if (key == "initial_state.preset") {
    if (value == "explicit") {
      cfg.initial_state.preset = "explicit";
    } else {
      cfg.initial_state = initial_state_preset(value);
    }
  } else if (key == "initial_state.real" || key == "initial_state.imag") {
    const auto v = parse_list(key, value);
    if (v.size() != 16) throw ConfigError(std::string(key) + ": expected 16 row-major entries");
    const bool real = key == "initial_state.real";
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        Complex& z = cfg.initial_state.matrix(r, c);
        z = real ? Complex(v[4 * r + c], z.imag()) : Complex(z.real(), v[4 * r + c]);
      }
    }
    cfg.initial_state.preset = "explicit";
  } else if (key == "output.dir") {
    cfg.output_path = std::string(value);
  } else if (key == "runtime.threads") {
    cfg.threads = parse_int(key, value);
  } else {
    for (const auto& f : kAxes) {
      if (key == f.key) {
        try {
          cfg.grid.*f.member = Axis::parse(value);
        } catch (const ConfigError& e) {
          throw ConfigError(std::string(key) + ": " + e.what());
        }
        return;
      }
    }
    throw ConfigError("unknown setting '" + std::string(key) + "'");
  }
}

void apply_override(ExperimentConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("override '" + std::string(assignment) + "' is not key=value");
  }
  apply_setting(cfg, trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

void load_config_text(ExperimentConfig& cfg, std::string_view text, std::string_view origin) {
  std::string section;
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    line = trim(line.substr(0, line.find_first_of("#;")));
    if (line.empty()) continue;
    try {
      if (line.front() == '[') {
        if (line.back() != ']') throw ConfigError("unterminated section header");
        section = std::string(trim(line.substr(1, line.size() - 2)));
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw ConfigError("expected key = value");
      const std::string key = std::string(trim(line.substr(0, eq)));
      apply_setting(cfg, section.empty() ? key : section + "." + key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      std::ostringstream os;
      os << (origin.empty() ? "config" : origin) << ":" << line_no << ": " << e.what();
      throw ConfigError(os.str());
    }
  }
}

void load_config_file(ExperimentConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  load_config_text(cfg, ss.str(), path.string());
}

std::vector<std::pair<std::string, std::string>> config_settings(const ExperimentConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out = {
      {"experiment", std::string(experiment_name(cfg.experiment))},
      {"params.gamma", format_value(cfg.params.gamma)},
      {"params.nbar", format_value(cfg.params.nbar)},
      {"params.chi", format_value(cfg.params.chi)},
      {"params.J", format_value(cfg.params.J)},
      {"oracle.step", format_value(cfg.oracle.step)},
      {"oracle.t_max", format_value(cfg.oracle.t_max)},
      {"oracle.richardson_step", format_value(cfg.oracle.richardson_step)},
      {"oracle.points", std::to_string(cfg.oracle.points)},
      {"oracle.enabled", cfg.with_oracle ? "true" : "false"},
      {"initial_state.preset", cfg.initial_state.preset},
      {"output.dir", cfg.output_path.generic_string()},
      {"runtime.threads", std::to_string(cfg.threads)},
  };
  for (const auto& f : kAxes) out.emplace_back(f.key, (cfg.grid.*f.member).to_string());
  if (cfg.initial_state.preset == "explicit") {
    std::vector<double> re, im;
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        re.push_back(cfg.initial_state.matrix(r, c).real());
        im.push_back(cfg.initial_state.matrix(r, c).imag());
      }
    }
    out.emplace_back("initial_state.real", join(re));
    out.emplace_back("initial_state.imag", join(im));
  }
  std::sort(out.begin(), out.end());
  return out;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("POSTMARKOV_THREADS")) {
    int n = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
    if (ec == std::errc() && ptr == s.data() + s.size() && n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(long n, int threads, const std::function<void(long)>& fn) {
  if (n <= 0) return;
  const int workers = static_cast<int>(std::min<long>(std::max(threads, 1), n));
  if (workers == 1) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (long i = next++; i < n && !stop; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        stop = true;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace postmarkov::runner
