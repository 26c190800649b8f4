#include "nisac/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "nisac/analytic.hpp"
#include "nisac/sim.hpp"

namespace nisac {
namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string format_value(double v) {
  if (std::isnan(v)) return "nan";
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

std::string c_suffix(double C) {
  std::ostringstream out;
  out << "_C" << C;
  return out.str();
}

std::set<Analysis> default_analyses(Preset preset) {
  switch (preset) {
    case Preset::ber_sweep:
      return {Analysis::mc_ber, Analysis::semi_ber, Analysis::upper_zf,
              Analysis::upper_jml};
    case Preset::outage_sweep:
      return {Analysis::mc_outage, Analysis::outage_zf, Analysis::outage_jml};
    case Preset::analytic_only:
      return {Analysis::semi_ber, Analysis::upper_zf, Analysis::upper_jml,
              Analysis::outage_zf, Analysis::outage_jml};
  }
  throw std::logic_error("unreachable");
}

struct RowWriter {
  std::vector<CsvRow>& rows;
  double p_dbm;
  std::string config_hash;

  void deterministic(int ue, const std::string& receiver,
                     const std::string& metric, double value) {
    rows.push_back({p_dbm, ue, receiver, metric, value, kNan, kNan, 0, 0,
                    config_hash});
  }
  void stochastic(int ue, const std::string& receiver,
                  const std::string& metric, const ProportionStats& stats,
                  std::uint64_t seed) {
    const double hw = stats.ci_half_width();
    rows.push_back({p_dbm, ue, receiver, metric, stats.ratio(),
                    std::max(0.0, stats.ratio() - hw),
                    std::min(1.0, stats.ratio() + hw), stats.total, seed,
                    config_hash});
  }
};

}  // namespace

void write_csv(std::ostream& out, const std::vector<CsvRow>& rows) {
  out << "p_com_dbm,ue_index,receiver,metric_name,value,ci_low,ci_high,"
         "trials,seed,config_hash\n";
  for (const auto& row : rows) {
    out << format_value(row.p_com_dbm) << ',' << row.ue_index << ','
        << row.receiver << ',' << row.metric_name << ','
        << format_value(row.value) << ',' << format_value(row.ci_low) << ','
        << format_value(row.ci_high) << ',' << row.trials << ',' << row.seed
        << ',' << row.config_hash << '\n';
  }
}

void write_csv(const std::filesystem::path& path,
               const std::vector<CsvRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path.string());
  write_csv(out, rows);
}

ExperimentResult run_experiment(const ExperimentConfig& config, Preset preset,
                                const std::filesystem::path& out_dir) {
  std::set<Analysis> analyses =
      config.analyses.empty() ? default_analyses(preset) : config.analyses;
  const bool wants_mc = analyses.count(Analysis::mc_ber) ||
                        analyses.count(Analysis::mc_outage);
  config.validate(wants_mc);

  const auto start = std::chrono::steady_clock::now();
  const std::string hash = config.hash();
  const CombinedConstellation constellation = build_combined(
      config.sys.theta_o, config.sys.theta_r, config.rotation_convention);

  ExperimentResult result;
  for (std::size_t point = 0; point < config.sweep_dbm.size(); ++point) {
    const double p_dbm = config.sweep_dbm[point];
    SystemParams sys = config.sys;
    sys.p_com = dbm_to_watt(p_dbm);

    RowWriter ber{result.ber_rows, p_dbm, hash};
    RowWriter outage{result.outage_rows, p_dbm, hash};

    McConfig mc;
    mc.params = sys;
    mc.constellation = constellation;
    mc.trials = config.trials;
    mc.seed = derive_stream(config.seed, point);
    mc.workers = config.resolved_workers();
    mc.distance_mode = config.distance_mode;
    mc.drift_mode = config.drift_mode;

    std::ostringstream summary;
    summary << "p_com=" << p_dbm << " dBm";

    if (analyses.count(Analysis::mc_ber)) {
      const BerResult r = run_ber(mc, config.receiver_zf, config.receiver_jml);
      for (int receiver = 0; receiver < 2; ++receiver) {
        if (receiver == 0 && !config.receiver_zf) continue;
        if (receiver == 1 && !config.receiver_jml) continue;
        const char* name = receiver == 0 ? "zf" : "jml";
        for (int ue = 0; ue < 2; ++ue) {
          ber.stochastic(ue, name, "mc_ber", r.stats[receiver][ue],
                         config.seed);
        }
        summary << "  mc_ber[" << name << "]=" << r.stats[receiver][0].ratio()
                << "/" << r.stats[receiver][1].ratio();
      }
    }
    if (analyses.count(Analysis::semi_ber) && config.receiver_zf) {
      for (int ue = 0; ue < 2; ++ue) {
        const double v = semi_analytic_ber_zf(sys, constellation, ue);
        ber.deterministic(ue, "zf", "semi_ber", v);
        summary << "  semi_ber[ue" << ue << "]=" << v;
      }
    }
    if (analyses.count(Analysis::upper_zf) && config.receiver_zf) {
      for (int ue = 0; ue < 2; ++ue) {
        const BoundValue v = upper_ber_zf(sys, constellation, ue);
        ber.deterministic(ue, "zf", "upper_zf", v.clamped);
        ber.deterministic(ue, "zf", "upper_zf_raw", v.raw);
      }
    }
    if (analyses.count(Analysis::upper_jml) && config.receiver_jml) {
      for (int ue = 0; ue < 2; ++ue) {
        const BoundValue v =
            upper_ber_jml(sys, constellation, ue, config.jml_bound_mode);
        ber.deterministic(ue, "jml", "upper_jml", v.clamped);
        ber.deterministic(ue, "jml", "upper_jml_raw", v.raw);
      }
    }
    for (double C : config.c_list) {
      if (analyses.count(Analysis::mc_outage)) {
        const OutageResult r = run_outage(mc, C);
        for (int receiver = 0; receiver < 2; ++receiver) {
          if (receiver == 0 && !config.receiver_zf) continue;
          if (receiver == 1 && !config.receiver_jml) continue;
          const char* name = receiver == 0 ? "zf" : "jml";
          for (int ue = 0; ue < 2; ++ue) {
            outage.stochastic(ue, name, "mc_outage" + c_suffix(C),
                              r.stats[receiver][ue], config.seed);
          }
        }
      }
      if (analyses.count(Analysis::outage_zf) && config.receiver_zf) {
        for (int ue = 0; ue < 2; ++ue) {
          outage.deterministic(ue, "zf", "outage_zf" + c_suffix(C),
                               outage_zf(sys, ue, C));
        }
      }
      if (analyses.count(Analysis::outage_jml) && config.receiver_jml) {
        for (int ue = 0; ue < 2; ++ue) {
          outage.deterministic(ue, "jml", "outage_jml" + c_suffix(C),
                               outage_jml(sys, ue, C));
        }
      }
    }
    std::cerr << summary.str() << "\n";
  }

  const auto elapsed = std::chrono::duration<double>(
      std::chrono::steady_clock::now() - start);
  std::cerr << config.sweep_dbm.size() << " sweep point(s), " << config.trials
            << " trials/point, " << elapsed.count() << " s\n";

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    if (!result.ber_rows.empty()) write_csv(out_dir / "ber.csv", result.ber_rows);
    if (!result.outage_rows.empty()) {
      write_csv(out_dir / "outage.csv", result.outage_rows);
    }
  }
  return result;
}

bool ValidationReport::all_passed() const {
  for (const auto& check : checks) {
    if (!check.passed) return false;
  }
  return true;
}

namespace {

void run_check(ValidationReport& report, const std::string& name,
               const std::function<std::string()>& body) {
  ValidationCheck check{name, false, ""};
  try {
    check.detail = body();
    check.passed = true;
  } catch (const std::exception& err) {
    check.detail = err.what();
  }
  report.checks.push_back(check);
}

void require(bool condition, const std::string& message) {
  if (!condition) throw std::runtime_error(message);
}

}  // namespace

ValidationReport validate_system(const ExperimentConfig& config) {
  ValidationReport report;

  run_check(report, "configuration invariants", [&config] {
    config.validate(false);
    return std::string("system and experiment parameters are consistent");
  });

  run_check(report, "specfun spot values", [] {
    require(std::abs(q_function(0.0) - 0.5) < 1e-15, "Q(0) != 1/2");
    require(std::abs(q_function(1.6448536269514722) - 0.05) < 1e-12,
            "Q(1.6449) != 0.05");
    const double g = regularized_gamma(1.0, 2.0, GammaTail::lower);
    require(std::abs(g - (1.0 - std::exp(-2.0))) < 1e-14,
            "P(1, 2) != 1 - e^-2");
    const double z = -4.0;
    const double ref = (2.0 / z) * (1.0 / std::sqrt(1.0 - z) - 1.0);
    require(std::abs(gauss_2f1(1.0, 1.5, 2.0, z) - ref) < 1e-12,
            "2F1(1,1.5;2;z) identity failed");
    return std::string("Q, P(a,x), 2F1 spot values match");
  });

  run_check(report, "constellation invariants", [&config] {
    const auto c = build_combined(config.sys.theta_o, config.sys.theta_r,
                                  RotationConvention::differential);
    double energy = 0.0;
    for (const auto& p : c.points) energy += std::norm(p);
    energy /= CombinedConstellation::kNumPoints;
    require(std::abs(energy - 2.0) < 1e-12, "mean symbol energy != 2");
    for (int n = 0; n < 16; ++n) {
      for (int m = n + 1; m < 16; ++m) {
        require(c.labels[n] != c.labels[m], "duplicate label");
      }
    }
    std::ostringstream out;
    out << "mean energy " << energy << ", 16 distinct labels";
    return out.str();
  });

  run_check(report, "as_printed rotation is ambiguous", [&config] {
    try {
      build_combined(config.sys.theta_o, config.sys.theta_r,
                     RotationConvention::as_printed);
    } catch (const AmbiguityError& err) {
      std::ostringstream out;
      out << "coincident pair (" << err.first() << ", " << err.second() << ")";
      return out.str();
    }
    throw std::runtime_error("expected AmbiguityError, none thrown");
  });

  run_check(report, "conditional BER vs grid oracle", [&config] {
    const auto c = build_combined(config.sys.theta_o, config.sys.theta_r,
                                  RotationConvention::differential);
    const auto geometry = decision_geometry(c);
    const double analytic = conditional_ber_zf(0.25, geometry, c);
    const double oracle = conditional_ber_oracle(0.25, c, 0);
    require(std::abs(analytic - oracle) < 2e-4, "mismatch beyond 2e-4");
    std::ostringstream out;
    out << "analytic " << analytic << " vs grid " << oracle;
    return out.str();
  });

  run_check(report, "outage closed forms well behaved", [&config] {
    SystemParams sys = config.sys;
    sys.p_com = dbm_to_watt(-30.0);
    double previous_zf = -1.0, previous_jml = -1.0;
    for (double C : {3.0, 5.0, 7.0, 9.0}) {
      for (int ue = 0; ue < 2; ++ue) {
        const double pz = outage_zf(sys, ue, C);
        const double pj = outage_jml(sys, ue, C);
        require(pz >= 0.0 && pz <= 1.0, "outage_zf out of [0,1]");
        require(pj >= 0.0 && pj <= 1.0, "outage_jml out of [0,1]");
        if (ue == 0) {
          require(pz >= previous_zf, "outage_zf not increasing in C");
          require(pj >= previous_jml, "outage_jml not increasing in C");
          previous_zf = pz;
          previous_jml = pj;
        }
      }
    }
    return std::string("probabilities in [0,1], monotone in target rate");
  });

  run_check(report, "Monte-Carlo vs semi-analytic smoke", [&config] {
    const auto c = build_combined(config.sys.theta_o, config.sys.theta_r,
                                  RotationConvention::differential);
    McConfig mc;
    mc.params = config.sys;
    mc.params.p_com = dbm_to_watt(-26.0);
    mc.constellation = c;
    mc.trials = 20'000;
    mc.seed = config.seed;
    mc.workers = config.resolved_workers();
    const BerResult r = run_ber(mc, true, false);
    const double predicted = semi_analytic_ber_zf(mc.params, c, 0);
    const double observed = r.stats[0][0].ratio();
    const double slack = 5.0 * r.stats[0][0].ci_half_width();
    require(std::abs(observed - predicted) < slack,
            "ZF Monte-Carlo BER outside 5 CI half-widths of semi-analytic");
    std::ostringstream out;
    out << "observed " << observed << " vs predicted " << predicted;
    return out.str();
  });

  return report;
}

}  // namespace nisac
