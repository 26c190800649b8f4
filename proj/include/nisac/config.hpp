#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "nisac/analytic.hpp"
#include "nisac/sim.hpp"

namespace nisac {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Analysis {
  mc_ber,
  semi_ber,
  upper_zf,
  upper_jml,
  mc_outage,
  outage_zf,
  outage_jml,
};

std::string to_string(Analysis a);
Analysis analysis_from_string(const std::string& name);

struct ExperimentConfig {
  SystemParams sys;
  std::vector<double> sweep_dbm = {-44, -42, -40, -38, -36, -34, -32,
                                   -30, -28, -26, -24, -22, -20};
  bool receiver_zf = true;
  bool receiver_jml = true;
  std::set<Analysis> analyses;  // empty means "preset default"
  std::vector<double> c_list = {5.0, 7.0, 9.0};
  long trials = 100'000;
  std::uint64_t seed = 1;
  bool seed_set = false;
  int workers = 0;  // 0: NISAC_WORKERS env var, else hardware concurrency
  DistanceMode distance_mode = DistanceMode::fixed;
  RotationConvention rotation_convention = RotationConvention::differential;
  JmlBoundMode jml_bound_mode = JmlBoundMode::as_printed;
  bool drift_mode = false;

  /// Throws ConfigError when an invariant is violated; `monte_carlo`
  /// additionally enforces the MC-only requirements (trial floor,
  /// mandatory seed).
  void validate(bool monte_carlo) const;

  int resolved_workers() const;

  /// Canonical key=value rendering; identical configs hash identically.
  std::string canonical() const;
  std::string hash() const;  // hex FNV-1a of canonical()
};

/// Parses a sectioned key-value config file.  Unknown keys, malformed
/// values and malformed lines raise ConfigError naming the key and line.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Applies one `key=value` override (same keys as the config file).
void apply_override(ExperimentConfig& config, const std::string& assignment);

}  // namespace nisac
