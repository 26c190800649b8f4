#include "nisac/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

namespace nisac {
namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream stream(s);
  std::string item;
  while (std::getline(stream, item, sep)) out.push_back(trim(item));
  return out;
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid numeric value for key '" + key + "': " + value);
  }
}

long parse_int(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    const long v = std::stol(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid integer value for key '" + key + "': " + value);
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("invalid boolean value for key '" + key + "': " + value);
}

// Either a comma list or a lo:step:hi range.
std::vector<double> parse_real_list(const std::string& key,
                                    const std::string& value) {
  std::vector<double> out;
  if (value.find(':') != std::string::npos) {
    const auto parts = split(value, ':');
    if (parts.size() != 3) {
      throw ConfigError("range for key '" + key + "' must be lo:step:hi");
    }
    const double lo = parse_real(key, parts[0]);
    const double step = parse_real(key, parts[1]);
    const double hi = parse_real(key, parts[2]);
    if (!(step > 0.0)) throw ConfigError("range step for '" + key + "' must be > 0");
    for (double v = lo; v <= hi + 1e-9 * step; v += step) out.push_back(v);
    return out;
  }
  for (const auto& item : split(value, ',')) {
    if (!item.empty()) out.push_back(parse_real(key, item));
  }
  return out;
}

}  // namespace

std::string to_string(Analysis a) {
  switch (a) {
    case Analysis::mc_ber: return "mc_ber";
    case Analysis::semi_ber: return "semi_ber";
    case Analysis::upper_zf: return "upper_zf";
    case Analysis::upper_jml: return "upper_jml";
    case Analysis::mc_outage: return "mc_outage";
    case Analysis::outage_zf: return "outage_zf";
    case Analysis::outage_jml: return "outage_jml";
  }
  throw std::logic_error("unreachable");
}

Analysis analysis_from_string(const std::string& name) {
  for (Analysis a : {Analysis::mc_ber, Analysis::semi_ber, Analysis::upper_zf,
                     Analysis::upper_jml, Analysis::mc_outage,
                     Analysis::outage_zf, Analysis::outage_jml}) {
    if (to_string(a) == name) return a;
  }
  throw ConfigError("unknown analysis: " + name);
}

void apply_override(ExperimentConfig& c, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("override must be key=value: " + assignment);
  }
  const std::string key = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));

  if (key == "alpha") c.sys.alpha = parse_real(key, value);
  else if (key == "f_c_hz") c.sys.f_c = parse_real(key, value);
  else if (key == "bandwidth_hz") c.sys.bandwidth = parse_real(key, value);
  else if (key == "symbol_duration_s") c.sys.symbol_duration = parse_real(key, value);
  else if (key == "noise_density_dbm_hz") c.sys.noise_density_dbm_hz = parse_real(key, value);
  else if (key == "antennas") c.sys.antennas = static_cast<int>(parse_int(key, value));
  else if (key == "radar_tx_gain_db") c.sys.radar_tx_gain_db = parse_real(key, value);
  else if (key == "radar_rx_gain_db") c.sys.radar_rx_gain_db = parse_real(key, value);
  else if (key == "rcs_dbm2") c.sys.rcs_dbm2 = parse_real(key, value);
  else if (key == "theta_o_rad") c.sys.theta_o = parse_real(key, value);
  else if (key == "theta_r_rad") c.sys.theta_r = parse_real(key, value);
  else if (key == "d1_m") c.sys.d1 = parse_real(key, value);
  else if (key == "d2_m") c.sys.d2 = parse_real(key, value);
  else if (key == "target_range_m") c.sys.target_range = parse_real(key, value);
  else if (key == "target_speed_mps") c.sys.target_speed = parse_real(key, value);
  else if (key == "power_split") c.sys.power_split = parse_real(key, value);
  else if (key == "p_radar_dbm") c.sys.p_radar = dbm_to_watt(parse_real(key, value));
  else if (key == "sweep_dbm") c.sweep_dbm = parse_real_list(key, value);
  else if (key == "c_list") c.c_list = parse_real_list(key, value);
  else if (key == "trials") c.trials = parse_int(key, value);
  else if (key == "seed") {
    c.seed = static_cast<std::uint64_t>(parse_int(key, value));
    c.seed_set = true;
  } else if (key == "workers") {
    c.workers = static_cast<int>(parse_int(key, value));
  } else if (key == "receivers") {
    c.receiver_zf = c.receiver_jml = false;
    for (const auto& r : split(value, ',')) {
      if (r == "zf") c.receiver_zf = true;
      else if (r == "jml") c.receiver_jml = true;
      else throw ConfigError("unknown receiver: " + r);
    }
  } else if (key == "analyses") {
    c.analyses.clear();
    for (const auto& a : split(value, ',')) {
      if (!a.empty()) c.analyses.insert(analysis_from_string(a));
    }
  } else if (key == "distance_mode") {
    if (value == "fixed") c.distance_mode = DistanceMode::fixed;
    else if (value == "randomized") c.distance_mode = DistanceMode::randomized;
    else throw ConfigError("distance_mode must be fixed or randomized: " + value);
  } else if (key == "rotation_convention") {
    if (value == "differential") c.rotation_convention = RotationConvention::differential;
    else if (value == "as_printed") c.rotation_convention = RotationConvention::as_printed;
    else throw ConfigError("rotation_convention must be differential or as_printed");
  } else if (key == "jml_bound_mode") {
    if (value == "as_printed") c.jml_bound_mode = JmlBoundMode::as_printed;
    else if (value == "averaged") c.jml_bound_mode = JmlBoundMode::averaged;
    else throw ConfigError("jml_bound_mode must be as_printed or averaged");
  } else if (key == "drift_mode") {
    c.drift_mode = parse_bool(key, value);
  } else {
    throw ConfigError("unknown config key: " + key);
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  ExperimentConfig config;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#' || text[0] == ';') continue;
    if (text.front() == '[' && text.back() == ']') continue;  // section header
    try {
      apply_override(config, text);
    } catch (const ConfigError& err) {
      throw ConfigError(path.string() + ":" + std::to_string(line_number) +
                        ": " + err.what());
    }
  }
  return config;
}

void ExperimentConfig::validate(bool monte_carlo) const {
  sys.validate();
  if (sweep_dbm.empty()) throw ConfigError("sweep_dbm must be non-empty");
  if (!receiver_zf && !receiver_jml) {
    throw ConfigError("at least one receiver must be enabled");
  }
  if (monte_carlo) {
    if (trials < 10'000) {
      throw ConfigError("trials must be >= 10000 for Monte-Carlo analyses");
    }
    if (!seed_set) {
      throw ConfigError("seed is mandatory for Monte-Carlo analyses");
    }
  }
}

int ExperimentConfig::resolved_workers() const {
  if (workers > 0) return workers;
  if (const char* env = std::getenv("NISAC_WORKERS")) {
    const int value = std::atoi(env);
    if (value > 0) return value;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream out;
  out.precision(17);
  out << "alpha=" << sys.alpha << "\nf_c_hz=" << sys.f_c
      << "\nbandwidth_hz=" << sys.bandwidth
      << "\nsymbol_duration_s=" << sys.symbol_duration
      << "\nnoise_density_dbm_hz=" << sys.noise_density_dbm_hz
      << "\nantennas=" << sys.antennas
      << "\nradar_tx_gain_db=" << sys.radar_tx_gain_db
      << "\nradar_rx_gain_db=" << sys.radar_rx_gain_db
      << "\nrcs_dbm2=" << sys.rcs_dbm2 << "\ntheta_o_rad=" << sys.theta_o
      << "\ntheta_r_rad=" << sys.theta_r << "\nd1_m=" << sys.d1
      << "\nd2_m=" << sys.d2 << "\ntarget_range_m=" << sys.target_range
      << "\ntarget_speed_mps=" << sys.target_speed
      << "\npower_split=" << sys.power_split
      << "\np_radar_w=" << sys.p_radar << "\nsweep_dbm=";
  for (double v : sweep_dbm) out << v << ",";
  out << "\nc_list=";
  for (double v : c_list) out << v << ",";
  out << "\nreceivers=" << (receiver_zf ? "zf," : "")
      << (receiver_jml ? "jml," : "") << "\nanalyses=";
  for (Analysis a : analyses) out << to_string(a) << ",";
  out << "\ntrials=" << trials << "\nseed=" << seed
      << "\ndistance_mode=" << (distance_mode == DistanceMode::fixed ? "fixed" : "randomized")
      << "\nrotation_convention="
      << (rotation_convention == RotationConvention::differential ? "differential" : "as_printed")
      << "\njml_bound_mode="
      << (jml_bound_mode == JmlBoundMode::as_printed ? "as_printed" : "averaged")
      << "\ndrift_mode=" << drift_mode << "\n";
  return out.str();
}

std::string ExperimentConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex << h;
  return out.str();
}

}  // namespace nisac
