#include "nisac/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nisac {

void SystemParams::validate() const {
  if (!(alpha > 0.0)) throw std::domain_error("SystemParams: alpha must be > 0");
  if (antennas < kUsers) {
    throw std::domain_error("SystemParams: antennas must be >= number of users");
  }
  if (!(power_split > 0.0 && power_split < 1.0)) {
    throw std::domain_error("SystemParams: power_split must be in (0, 1)");
  }
  if (!(p_com >= 0.0) || !(p_radar >= 0.0)) {
    throw std::domain_error("SystemParams: powers must be >= 0");
  }
  if (!(d1 > 0.0 && d2 > 0.0 && target_range > 0.0)) {
    throw std::domain_error("SystemParams: distances must be > 0");
  }
  if (!(f_c > 0.0) || !(bandwidth > 0.0) || !(symbol_duration > 0.0)) {
    throw std::domain_error("SystemParams: frequencies and durations must be > 0");
  }
}

ChannelRealization sample_comm_channel(std::mt19937_64& rng,
                                       const SystemParams& params) {
  ChannelRealization chan;
  chan.beta = {params.beta(0), params.beta(1)};
  chan.H.resize(params.antennas, SystemParams::kUsers);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int k = 0; k < SystemParams::kUsers; ++k) {
    const double scale = std::sqrt(chan.beta[k] / 2.0);
    for (int m = 0; m < params.antennas; ++m) {
      chan.H(m, k) = {scale * normal(rng), scale * normal(rng)};
    }
  }
  return chan;
}

RadarChannel radar_channel(const SystemParams& params, std::int64_t mu) {
  if (!(params.target_range > 0.0)) {
    throw std::domain_error("radar_channel: target range must be > 0");
  }
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  RadarChannel radar;
  const double gains = db_to_linear(params.radar_tx_gain_db) *
                       db_to_linear(params.radar_rx_gain_db) *
                       db_to_linear(params.rcs_dbm2);
  radar.gain = params.wavelength() /
               (8.0 * params.target_range * params.target_range) *
               std::sqrt(gains / (std::numbers::pi * std::numbers::pi *
                                  std::numbers::pi));
  radar.delay_term = 2.0 * params.target_range / params.c0;
  radar.doppler_hz = 2.0 * params.target_speed * params.f_c / params.c0;
  radar.pair_index = mu;
  radar.coeff = radar.gain *
                std::polar(1.0, -kTwoPi * radar.delay_term) *
                std::polar(1.0, kTwoPi * radar.doppler_hz *
                                    static_cast<double>(mu) *
                                    params.symbol_duration);
  return radar;
}

std::complex<double> sample_noise(std::mt19937_64& rng, double sigma2) {
  std::normal_distribution<double> normal(0.0, std::sqrt(sigma2 / 2.0));
  return {normal(rng), normal(rng)};
}

}  // namespace nisac
