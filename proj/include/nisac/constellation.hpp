#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <stdexcept>
#include <string>

namespace nisac {

/// How the second-period phase offset is applied.  `differential` adds
/// theta_r - theta_o on top of the base second-period phases, which keeps
/// all 16 combined points distinct for the default angles; `as_printed`
/// adds theta_r directly and is retained because that reading produces a
/// coincident pair (a useful negative example).
enum class RotationConvention { differential, as_printed };

class AmbiguityError : public std::runtime_error {
 public:
  AmbiguityError(const std::string& what, int first, int second)
      : std::runtime_error(what), first_(first), second_(second) {}
  int first() const { return first_; }
  int second() const { return second_; }

 private:
  int first_, second_;
};

/// The 16-point constellation of two-period symbol sums.  A point is the
/// sum of a unit-energy first-period QPSK symbol and a unit-energy rotated
/// second-period QPSK symbol; its 4-bit label concatenates the Gray labels
/// of the two periods (first-period bits first).  Indices are 0-based.
struct CombinedConstellation {
  static constexpr int kNumPoints = 16;

  double theta_o = 0.0;
  double theta_r = 0.0;
  RotationConvention convention = RotationConvention::differential;
  std::array<std::complex<double>, kNumPoints> points{};
  std::array<std::string, kNumPoints> labels{};

  /// First-period (t=0) and second-period (t=1) unit symbols whose sum is
  /// point n.
  std::array<std::array<std::complex<double>, 2>, kNumPoints> period_symbols{};

  /// Value of the given bit position (0..3) in the label of point n.
  int bit(int n, int position) const { return labels[n][position] - '0'; }
};

CombinedConstellation build_combined(double theta_o, double theta_r,
                                     RotationConvention convention);

/// Per-bit partition of the constellation and the 8x8 cross-distance table
/// between the correct-bit and wrong-bit halves.
struct DistanceSets {
  std::array<int, 8> correct{};  // indices where the bit reads 0
  std::array<int, 8> wrong{};    // indices where the bit reads 1
  Eigen::Matrix<double, 8, 8> distance;  // distance(c, w) = |s_c - s_w|
};

DistanceSets distance_sets(const CombinedConstellation& c, int bit_position);

/// Index of the closest constellation point; ties resolve to the lowest
/// index.
int nearest_symbol(const CombinedConstellation& c, std::complex<double> point);

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vertices and slopes of the boundary between the two MSB half-sets,
/// computed from perpendicular bisectors of opposite-MSB point pairs.
/// Only the default configuration (theta_o = pi/4, theta_r = pi/2,
/// differential) is supported.
struct DecisionGeometry {
  Eigen::Vector2d o, a, b, c, d, e, f, g, h;
  double k_ac, k_bd, k_ce, k_df, k_oa, k_ob, k_oe, k_of;

  /// Membership test for the error region (MSB decoded as 1), expressed
  /// through the nine sub-regions bounded by the labeled vertices.
  bool in_error_region(double x, double y) const;
  bool in_region(int index, double x, double y) const;  // index 1..9
};

DecisionGeometry decision_geometry(const CombinedConstellation& c);

}  // namespace nisac
