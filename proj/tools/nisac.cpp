#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nisac/experiment.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir = ".";
  long long seed = -1;
  int workers = -1;
};

void attach_common(CLI::App* cmd, CommonOptions& options) {
  cmd->add_option("--config", options.config_path, "Config file path")
      ->check(CLI::ExistingFile);
  cmd->add_option("--set", options.overrides,
                  "Override a config key (key=value, repeatable)");
  cmd->add_option("--out", options.out_dir, "Output directory for CSV files");
  cmd->add_option("--seed", options.seed, "Monte-Carlo seed");
  cmd->add_option("--workers", options.workers,
                  "Worker thread count (default: NISAC_WORKERS env, then "
                  "hardware concurrency)");
}

nisac::ExperimentConfig build_config(const CommonOptions& options) {
  nisac::ExperimentConfig config;
  if (!options.config_path.empty()) {
    config = nisac::load_config(options.config_path);
  }
  for (const auto& assignment : options.overrides) {
    nisac::apply_override(config, assignment);
  }
  if (options.seed >= 0) {
    config.seed = static_cast<std::uint64_t>(options.seed);
    config.seed_set = true;
  }
  if (options.workers > 0) config.workers = options.workers;
  return config;
}

int run_preset(const CommonOptions& options, nisac::Preset preset) {
  const auto config = build_config(options);
  nisac::run_experiment(config, preset, options.out_dir);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Link-level simulator and analytical evaluator for a two-user uplink "
      "NOMA system with an integrated monostatic radar"};
  app.require_subcommand(1);

  CommonOptions ber_options, outage_options, analytic_options,
      validate_options;

  CLI::App* ber = app.add_subcommand(
      "ber-sweep", "Monte-Carlo and analytic BER over the power sweep");
  attach_common(ber, ber_options);

  CLI::App* outage = app.add_subcommand(
      "outage-sweep", "Monte-Carlo and analytic outage over the power sweep");
  attach_common(outage, outage_options);

  CLI::App* analytic = app.add_subcommand(
      "analytic", "Closed-form and semi-analytic curves only (no Monte-Carlo)");
  attach_common(analytic, analytic_options);

  CLI::App* validate = app.add_subcommand(
      "validate", "Internal consistency checks; exits non-zero on failure");
  attach_common(validate, validate_options);

  CLI11_PARSE(app, argc, argv);

  try {
    if (ber->parsed()) return run_preset(ber_options, nisac::Preset::ber_sweep);
    if (outage->parsed()) {
      return run_preset(outage_options, nisac::Preset::outage_sweep);
    }
    if (analytic->parsed()) {
      return run_preset(analytic_options, nisac::Preset::analytic_only);
    }
    if (validate->parsed()) {
      const auto config = build_config(validate_options);
      const auto report = nisac::validate_system(config);
      for (const auto& check : report.checks) {
        std::cout << (check.passed ? "PASS" : "FAIL") << "  " << check.name
                  << ": " << check.detail << "\n";
      }
      return report.all_passed() ? 0 : 1;
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 0;
}
