// postmarkov run <experiment> [--config FILE] [--out DIR] [--override key=value ...] [--with-oracle]
//
// Exit status: 0 when every verdict passes (or is not applicable), 1 when a
// verdict fails, 2 on usage, configuration or I/O errors.

#include <CLI11.hpp>
#include <iostream>

#include "postmarkov/errors.hpp"
#include "postmarkov/runner.hpp"

namespace pm = postmarkov::runner;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

int run_command(const std::string& experiment, const std::string& config_path,
                const std::string& out_dir, const std::vector<std::string>& overrides,
                bool with_oracle, bool quiet) {
  const auto exp = pm::parse_experiment(experiment);
  auto cfg = pm::default_config(exp);
  if (!config_path.empty()) {
    pm::load_config_file(cfg, config_path);
    if (cfg.experiment != exp) {
      throw postmarkov::ConfigError("config file selects experiment '" +
                                    std::string(pm::experiment_name(cfg.experiment)) +
                                    "' but the command line asks for '" + experiment + "'");
    }
  }
  if (!out_dir.empty()) cfg.output_path = out_dir;
  for (const auto& o : overrides) pm::apply_override(cfg, o);
  if (cfg.experiment != exp) throw postmarkov::ConfigError("--override may not change the experiment");
  if (with_oracle) cfg.with_oracle = true;

  const auto report = pm::run(cfg);
  pm::emit_csv(report, cfg.output_path);

  if (!quiet) {
    for (const auto& v : report.verdicts) {
      std::cout << "[" << pm::verdict_name(v.verdict) << "] " << v.name << ": " << v.detail << "\n";
    }
    std::cout << "wrote " << report.panels.size() << " panel(s) and summary.json to "
              << cfg.output_path.string() << "\n";
  }
  return report.any_fail() ? kExitFail : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Post-Markovian master equation experiments"};
  app.set_version_flag("--version", std::string(pm::code_version()));
  app.require_subcommand(1);

  std::string experiment, config_path, out_dir;
  std::vector<std::string> overrides;
  bool with_oracle = false, quiet = false;

  std::string names;
  for (auto e : pm::all_experiments()) names += (names.empty() ? "" : ", ") + std::string(pm::experiment_name(e));

  auto* run = app.add_subcommand("run", "Run one experiment and write CSV + summary.json");
  run->add_option("experiment", experiment, "One of: " + names)->required();
  run->add_option("--config", config_path, "key = value config file with [sections]");
  run->add_option("--out", out_dir, "Output directory (default out/<experiment>)");
  run->add_option("--override", overrides, "section.key=value, applied after the config file")
      ->take_all();
  run->add_flag("--with-oracle", with_oracle, "Cross-check closed forms against the quadrature oracle");
  run->add_flag("-q,--quiet", quiet, "Do not print verdicts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    return run_command(experiment, config_path, out_dir, overrides, with_oracle, quiet);
  } catch (const postmarkov::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
  } catch (const postmarkov::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kExitUsage;
}
