#include <cmath>
#include <random>

#include "doctest.h"
#include "nisac/channel.hpp"

using nisac::SystemParams;

TEST_CASE("decibel conversions") {
  CHECK(nisac::dbm_to_watt(0.0) == doctest::Approx(1e-3).epsilon(1e-14));
  CHECK(nisac::dbm_to_watt(30.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(nisac::watt_to_dbm(1e-3) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(nisac::db_to_linear(3.0) == doctest::Approx(1.9952623).epsilon(1e-7));
  CHECK(nisac::watt_to_dbm(nisac::dbm_to_watt(-27.3)) ==
        doctest::Approx(-27.3).epsilon(1e-12));
}

TEST_CASE("derived physical quantities from the defaults") {
  const SystemParams p;
  CHECK(p.noise_variance() == doctest::Approx(3.981e-14).epsilon(1e-3));
  CHECK(p.beta(0) == doctest::Approx(1.131e-6).epsilon(1e-3));
  CHECK(p.wavelength() == doctest::Approx(0.051688).epsilon(1e-4));
  CHECK(p.ue_power(0) + p.ue_power(1) == doctest::Approx(p.p_com).epsilon(1e-14));
}

TEST_CASE("parameter validation rejects broken configurations") {
  SystemParams p;
  CHECK_NOTHROW(p.validate());
  p.antennas = 1;  // fewer antennas than users
  CHECK_THROWS(p.validate());
  p = SystemParams{};
  p.power_split = 1.5;
  CHECK_THROWS(p.validate());
  p = SystemParams{};
  p.d1 = -3.0;
  CHECK_THROWS(p.validate());
  p = SystemParams{};
  p.alpha = 0.0;
  CHECK_THROWS(p.validate());
}

TEST_CASE("communication channel statistics match the per-entry variance") {
  const SystemParams p;
  std::mt19937_64 rng(7);
  double power[2] = {0.0, 0.0};
  double mean_real[2] = {0.0, 0.0};
  const int draws = 20'000;
  for (int i = 0; i < draws; ++i) {
    const auto chan = nisac::sample_comm_channel(rng, p);
    REQUIRE(chan.H.rows() == p.antennas);
    REQUIRE(chan.H.cols() == 2);
    for (int k = 0; k < 2; ++k) {
      power[k] += chan.H.col(k).squaredNorm();
      mean_real[k] += chan.H.col(k).real().sum();
    }
  }
  for (int k = 0; k < 2; ++k) {
    const double per_entry = power[k] / (draws * p.antennas);
    CHECK(per_entry == doctest::Approx(p.beta(k)).epsilon(0.03));
    CHECK(std::abs(mean_real[k] / (draws * p.antennas)) <
          3.0 * std::sqrt(p.beta(k) / 2.0 / (draws * p.antennas)) * 3.0);
  }
}

TEST_CASE("radar channel coefficient structure") {
  const SystemParams p;
  const auto r0 = nisac::radar_channel(p, 0);
  CHECK(r0.delay_term == doctest::Approx(2.0 * p.target_range / p.c0).epsilon(1e-14));
  CHECK(r0.doppler_hz ==
        doctest::Approx(2.0 * p.target_speed * p.f_c / p.c0).epsilon(1e-12));
  CHECK(std::abs(r0.coeff) == doctest::Approx(r0.gain).epsilon(1e-13));
  // The Doppler phase advances with the pair index; the magnitude does not.
  const auto r5 = nisac::radar_channel(p, 5);
  CHECK(std::abs(r5.coeff) == doctest::Approx(r0.gain).epsilon(1e-13));
  CHECK(std::abs(r5.coeff - r0.coeff) > 1e-12 * r0.gain);
  // Two-way amplitude gain shrinks with range (R^-2 law).
  SystemParams far = p;
  far.target_range = 2.0 * p.target_range;
  CHECK(nisac::radar_channel(far, 0).gain ==
        doctest::Approx(r0.gain / 4.0).epsilon(1e-12));
}

TEST_CASE("noise samples have the requested power") {
  std::mt19937_64 rng(11);
  const double sigma2 = 2.5e-13;
  double acc = 0.0;
  const int draws = 200'000;
  for (int i = 0; i < draws; ++i) acc += std::norm(nisac::sample_noise(rng, sigma2));
  CHECK(acc / draws == doctest::Approx(sigma2).epsilon(0.02));
}
