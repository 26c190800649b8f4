#include <cmath>

#include "doctest.h"
#include "mp_oracle.hpp"
#include "nisac/specfun.hpp"

using nisac::GammaTail;

namespace {

double to_double(const mp_oracle::Real& x) { return x.convert_to<double>(); }

double rel_error(double have, double want) {
  if (want == 0.0) return std::abs(have);
  return std::abs(have - want) / std::abs(want);
}

}  // namespace

TEST_CASE("q_function spot values and oracle grid") {
  CHECK(nisac::q_function(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(nisac::q_function(1.6448536269514722) ==
        doctest::Approx(0.05).epsilon(1e-12));
  for (double x = -8.0; x <= 8.0; x += 0.25) {
    const double want = to_double(mp_oracle::q_function(mp_oracle::Real(x)));
    CHECK(rel_error(nisac::q_function(x), want) < 1e-12);
  }
  // Symmetry Q(-x) = 1 - Q(x).
  for (double x : {0.3, 1.7, 3.9}) {
    CHECK(nisac::q_function(-x) ==
          doctest::Approx(1.0 - nisac::q_function(x)).epsilon(1e-14));
  }
}

TEST_CASE("regularized incomplete gamma against the multiprecision oracle") {
  for (double a : {0.5, 1.0, 2.5, 4.0, 5.0, 10.0}) {
    for (double x : {0.1, 0.5, 1.0, 2.0, 4.0, 8.0, 20.0}) {
      const double lower = nisac::regularized_gamma(a, x, GammaTail::lower);
      const double upper = nisac::regularized_gamma(a, x, GammaTail::upper);
      CHECK(std::abs(lower + upper - 1.0) <= 1e-14);
      const double want = to_double(mp_oracle::gamma_lower_regularized(
          mp_oracle::Real(a), mp_oracle::Real(x)));
      CHECK(rel_error(lower, want) < 1e-12);
    }
  }
  CHECK(nisac::regularized_gamma(1.0, 2.0, GammaTail::lower) ==
        doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-14));
}

TEST_CASE("gauss_2f1 closed-form identity and Pfaff property") {
  // 2F1(1, 1.5; 2; z) = (2/z) ((1-z)^{-1/2} - 1).
  for (double z : {-0.5, -4.0, -100.0}) {
    const double want = (2.0 / z) * (1.0 / std::sqrt(1.0 - z) - 1.0);
    CHECK(rel_error(nisac::gauss_2f1(1.0, 1.5, 2.0, z), want) < 1e-12);
  }
  // Oracle comparison across a wide negative-z grid.
  for (double z = -1000.0; z <= -1e-3; z /= 4.0) {
    for (auto [a, b, c] : {std::array<double, 3>{0.5, 2.5, 1.5},
                           std::array<double, 3>{1.0, 1.5, 2.0},
                           std::array<double, 3>{2.0, 2.5, 3.0},
                           std::array<double, 3>{5.0, 5.5, 6.0}}) {
      const double want = to_double(
          mp_oracle::hyp2f1(mp_oracle::Real(a), mp_oracle::Real(b),
                            mp_oracle::Real(c), mp_oracle::Real(z)));
      CHECK(rel_error(nisac::gauss_2f1(a, b, c, z), want) < 1e-12);
    }
  }
  CHECK(nisac::gauss_2f1(1.0, 2.0, 3.0, 0.0) == 1.0);
  CHECK_THROWS(nisac::gauss_2f1(1.0, 2.0, -1.0, -0.5));
}

TEST_CASE("adaptive quadrature on known integrals") {
  const auto settings = nisac::QuadratureSettings{};
  CHECK(nisac::integrate([](double x) { return x * x; }, 0.0, 1.0, settings) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(nisac::integrate([](double x) { return std::exp(-x * x); }, -6.0, 6.0,
                         settings) ==
        doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
  CHECK(nisac::integrate_half_line([](double x) { return std::exp(-x); },
                                   settings) ==
        doctest::Approx(1.0).epsilon(1e-10));
  // Erlang-average identity for M=1, eta=2:
  // int_0^inf Q(sqrt(d)) e^{-d/2}/2 dd = (1 - sqrt(0.5)) / 2.
  const double eta = 2.0;
  const double value = nisac::integrate_half_line(
      [eta](double d) {
        return nisac::q_function(std::sqrt(d)) * std::exp(-d / eta) / eta;
      },
      settings);
  CHECK(value ==
        doctest::Approx((1.0 - std::sqrt(eta / (2.0 + eta))) / 2.0)
            .epsilon(1e-9));
}

TEST_CASE("quadrature failure carries the best estimate") {
  nisac::QuadratureSettings tight;
  tight.abs_tol = 1e-300;
  tight.rel_tol = 1e-300;
  tight.max_subdivisions = 4;
  try {
    nisac::integrate([](double x) { return std::exp(-x * x); }, -6.0, 6.0,
                     tight);
    FAIL("expected NumericError");
  } catch (const nisac::NumericError& err) {
    CHECK(err.best_estimate() ==
          doctest::Approx(std::sqrt(M_PI)).epsilon(1e-6));
  }
}

TEST_CASE("quadrature settings validation") {
  nisac::QuadratureSettings bad;
  bad.abs_tol = -1.0;
  CHECK_THROWS(bad.validate());
}
