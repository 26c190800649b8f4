#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "nisac/config.hpp"

namespace nisac {

/// One output record.  `ci_low`/`ci_high` are NaN for deterministic
/// (closed-form and semi-analytic) metrics.
struct CsvRow {
  double p_com_dbm = 0.0;
  int ue_index = 0;
  std::string receiver;     // "zf" or "jml"
  std::string metric_name;  // e.g. mc_ber, semi_ber, mc_outage_C5
  double value = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  long trials = 0;          // 0 for deterministic metrics
  std::uint64_t seed = 0;
  std::string config_hash;
};

void write_csv(std::ostream& out, const std::vector<CsvRow>& rows);
void write_csv(const std::filesystem::path& path,
               const std::vector<CsvRow>& rows);

enum class Preset { ber_sweep, outage_sweep, analytic_only };

struct ExperimentResult {
  std::vector<CsvRow> ber_rows;
  std::vector<CsvRow> outage_rows;
};

/// Runs every selected analysis over the power sweep and, when `out_dir`
/// is non-empty, writes ber.csv / outage.csv there.  A one-line summary
/// per sweep point goes to stderr.
ExperimentResult run_experiment(const ExperimentConfig& config, Preset preset,
                                const std::filesystem::path& out_dir);

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool all_passed() const;
};

/// Fast internal consistency suite: special-function spot values,
/// constellation invariants, closed forms against direct quadrature, and
/// a small Monte-Carlo smoke run against the semi-analytic curve.
ValidationReport validate_system(const ExperimentConfig& config);

}  // namespace nisac
