#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "nisac/constellation.hpp"

using nisac::CombinedConstellation;
using nisac::RotationConvention;

namespace {

const double kPi = std::acos(-1.0);

CombinedConstellation default_constellation() {
  return nisac::build_combined(kPi / 4, kPi / 2,
                               RotationConvention::differential);
}

}  // namespace

TEST_CASE("combined constellation coordinates for the default rotation") {
  const auto c = default_constellation();
  // First point: cos(pi/4) + cos(pi/2), sin(pi/4) + sin(pi/2).
  CHECK(c.points[0].real() == doctest::Approx(0.70711).epsilon(1e-4));
  CHECK(c.points[0].imag() == doctest::Approx(1.70711).epsilon(1e-4));
  // Ninth point is the reflection giving cross-half distance 2.
  CHECK(std::abs(c.points[0] - c.points[8]) == doctest::Approx(2.0).epsilon(1e-12));
  // Mean symbol energy of the two-period sum is exactly 2.
  double energy = 0.0;
  for (const auto& p : c.points) energy += std::norm(p);
  CHECK(energy / 16.0 == doctest::Approx(2.0).epsilon(1e-13));
  // Each point really is the sum of its two unit period symbols.
  for (int n = 0; n < 16; ++n) {
    CHECK(std::abs(c.period_symbols[n][0]) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::abs(c.period_symbols[n][1]) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::abs(c.period_symbols[n][0] + c.period_symbols[n][1] -
                   c.points[n]) < 1e-13);
  }
}

TEST_CASE("labels are distinct 4-bit Gray concatenations") {
  const auto c = default_constellation();
  std::set<std::string> labels(c.labels.begin(), c.labels.end());
  CHECK(labels.size() == 16);
  CHECK(c.labels[7] == "0110");
  for (const auto& label : c.labels) {
    CHECK(label.size() == 4);
    CHECK(label.find_first_not_of("01") == std::string::npos);
  }
  // Consecutive points differ in exactly one second-period bit.
  for (int n = 0; n + 1 < 4; ++n) {
    int diff = 0;
    for (int b = 2; b < 4; ++b) diff += c.bit(n, b) != c.bit(n + 1, b);
    CHECK(diff == 1);
  }
}

TEST_CASE("as_printed rotation collapses two points") {
  CHECK_THROWS_AS(nisac::build_combined(kPi / 4, kPi / 2,
                                        RotationConvention::as_printed),
                  nisac::AmbiguityError);
  try {
    nisac::build_combined(kPi / 4, kPi / 2, RotationConvention::as_printed);
  } catch (const nisac::AmbiguityError& err) {
    // The second printed point lands on the origin together with another.
    CHECK(err.first() >= 0);
    CHECK(err.second() > err.first());
  }
}

TEST_CASE("distance sets are the same multiset for every bit position") {
  const auto c = default_constellation();
  std::vector<std::vector<double>> multisets;
  for (int bit = 0; bit < 4; ++bit) {
    const auto sets = nisac::distance_sets(c, bit);
    std::vector<double> d;
    for (int i = 0; i < 8; ++i) {
      for (int j = 0; j < 8; ++j) d.push_back(sets.distance(i, j));
    }
    std::sort(d.begin(), d.end());
    multisets.push_back(d);
    // Partition property: the two halves cover all indices.
    std::set<int> all(sets.correct.begin(), sets.correct.end());
    all.insert(sets.wrong.begin(), sets.wrong.end());
    CHECK(all.size() == 16);
    for (int i = 0; i < 8; ++i) CHECK(c.bit(sets.correct[i], bit) == 0);
    for (int i = 0; i < 8; ++i) CHECK(c.bit(sets.wrong[i], bit) == 1);
  }
  for (int bit = 1; bit < 4; ++bit) {
    for (std::size_t i = 0; i < multisets[0].size(); ++i) {
      CHECK(multisets[bit][i] == doctest::Approx(multisets[0][i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("nearest_symbol identifies every point and breaks ties low") {
  const auto c = default_constellation();
  for (int n = 0; n < 16; ++n) {
    CHECK(nisac::nearest_symbol(c, c.points[n]) == n);
  }
  // The origin is equidistant from several points; the lowest index wins.
  const int at_origin = nisac::nearest_symbol(c, {0.0, 0.0});
  for (int n = 0; n < at_origin; ++n) {
    CHECK(std::abs(c.points[n]) >
          std::abs(c.points[at_origin]) - 1e-12);
  }
}

TEST_CASE("decision geometry matches the analytic vertices and slopes") {
  const auto c = default_constellation();
  const auto g = nisac::decision_geometry(c);
  const double s2 = std::sqrt(2.0);
  CHECK(g.o.norm() < 1e-9);
  CHECK((g.a - Eigen::Vector2d(-1.0, 1.0)).norm() < 1e-9);
  CHECK((g.b - Eigen::Vector2d(1.0, 1.0)).norm() < 1e-9);
  CHECK((g.c - Eigen::Vector2d(-s2, 0.0)).norm() < 1e-9);
  CHECK((g.d - Eigen::Vector2d(s2, 0.0)).norm() < 1e-9);
  CHECK((g.e - Eigen::Vector2d(-1.0, -1.0)).norm() < 1e-9);
  CHECK((g.f - Eigen::Vector2d(1.0, -1.0)).norm() < 1e-9);
  CHECK(g.k_ac == doctest::Approx(1.0 + s2).epsilon(1e-12));
  CHECK(g.k_ob == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(g.k_oa == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("error region membership agrees with nearest-symbol MSB") {
  const auto c = default_constellation();
  const auto g = nisac::decision_geometry(c);
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  int checked = 0;
  for (int i = 0; i < 20'000; ++i) {
    const double x = coord(rng), y = coord(rng);
    const int n = nisac::nearest_symbol(c, {x, y});
    // Skip points within 1e-6 of a boundary, where the two rules may
    // legitimately tie-break differently.
    const double d_best = std::abs(std::complex<double>(x, y) - c.points[n]);
    bool near_tie = false;
    for (int m = 0; m < 16; ++m) {
      if (m == n) continue;
      if (std::abs(std::complex<double>(x, y) - c.points[m]) - d_best < 1e-6) {
        near_tie = true;
      }
    }
    if (near_tie) continue;
    ++checked;
    CHECK(g.in_error_region(x, y) == (c.bit(n, 0) == 1));
  }
  CHECK(checked > 15'000);
}

TEST_CASE("geometry is rejected for non-default rotations") {
  const auto c =
      nisac::build_combined(0.3, 1.1, RotationConvention::differential);
  CHECK_THROWS_AS(nisac::decision_geometry(c), nisac::GeometryError);
}
