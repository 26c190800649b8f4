#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstdint>
#include <random>

namespace nisac {

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Physical and simulation constants.  Gains, RCS and the noise density
/// are stored in decibel units as configured and converted to linear at
/// the point of use; powers and distances are linear SI (W, m, Hz, s).
struct SystemParams {
  static constexpr int kUsers = 2;

  double alpha = 3.5;              // path loss exponent
  double f_c = 5.8e9;              // carrier frequency, Hz
  double bandwidth = 10e6;         // Hz
  double symbol_duration = 10e-6;  // s
  double noise_density_dbm_hz = -174.0;
  int antennas = 5;
  double radar_tx_gain_db = 2.0;
  double radar_rx_gain_db = 2.0;
  double rcs_dbm2 = 0.0;
  double theta_o = 0.7853981633974483;  // pi/4
  double theta_r = 1.5707963267948966;  // pi/2
  double c0 = 299792458.0;
  double d1 = 50.0;             // m
  double d2 = 60.0;             // m
  double target_range = 30.0;   // m
  double target_speed = 10.0;   // m/s
  double p_com = 1e-7;          // total communication power, W
  double power_split = 0.5;     // P_1 = split * P_com
  double p_radar = 1e-3;        // W

  double beta(int ue) const { return std::pow(ue == 0 ? d1 : d2, -alpha); }
  double ue_power(int ue) const {
    return ue == 0 ? power_split * p_com : (1.0 - power_split) * p_com;
  }
  double wavelength() const { return c0 / f_c; }
  /// Noise variance per antenna per symbol period, W.
  double noise_variance() const {
    return dbm_to_watt(noise_density_dbm_hz) * bandwidth;
  }

  void validate() const;
};

/// One draw of the M x 2 uplink channel matrix.  Column k has i.i.d.
/// CN(0, beta_k) entries, so every closed form parameterized by rate
/// 1/beta_k holds exactly.
struct ChannelRealization {
  Eigen::MatrixXcd H;
  std::array<double, 2> beta;
};

ChannelRealization sample_comm_channel(std::mt19937_64& rng,
                                       const SystemParams& params);

/// Deterministic two-way radar channel at symbol-pair index mu.
struct RadarChannel {
  double gain = 0.0;         // two-way amplitude gain
  double delay_term = 0.0;   // 2R/c0, s
  double doppler_hz = 0.0;
  std::int64_t pair_index = 0;
  std::complex<double> coeff;  // per-antenna coefficient, identical across antennas
};

RadarChannel radar_channel(const SystemParams& params, std::int64_t mu);

/// One circularly-symmetric complex Gaussian noise sample with
/// E[|n|^2] = sigma2.
std::complex<double> sample_noise(std::mt19937_64& rng, double sigma2);

}  // namespace nisac
