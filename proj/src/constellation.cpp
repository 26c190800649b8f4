#include "nisac/constellation.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace nisac {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr const char* kGray[4] = {"00", "01", "11", "10"};

Eigen::Vector2d as_vec(std::complex<double> z) { return {z.real(), z.imag()}; }

// Perpendicular bisector of (p, q) as the line n.x = rhs.
struct Line {
  Eigen::Vector2d n;
  double rhs;
};

Line bisector(const Eigen::Vector2d& p, const Eigen::Vector2d& q) {
  return {q - p, 0.5 * (q.squaredNorm() - p.squaredNorm())};
}

}  // namespace

CombinedConstellation build_combined(double theta_o, double theta_r,
                                     RotationConvention convention) {
  if (!std::isfinite(theta_o) || !std::isfinite(theta_r)) {
    throw std::domain_error("build_combined: non-finite phase shift");
  }
  CombinedConstellation c;
  c.theta_o = theta_o;
  c.theta_r = theta_r;
  c.convention = convention;
  const double delta =
      convention == RotationConvention::differential ? theta_r - theta_o : theta_r;
  for (int i = 0; i < CombinedConstellation::kNumPoints; ++i) {
    const int n = i + 1;
    const double phase1 = std::ceil(n / 4.0) * kPi / 2.0 - kPi / 4.0;
    const double phase2 = (2.0 * n - 1.0) * kPi / 4.0 + delta;
    c.period_symbols[i][0] = std::polar(1.0, phase1);
    c.period_symbols[i][1] = std::polar(1.0, phase2);
    c.points[i] = c.period_symbols[i][0] + c.period_symbols[i][1];
    c.labels[i] = std::string(kGray[(n + 3) / 4 - 1]) + kGray[(n - 1) % 4];
  }
  for (int i = 0; i < CombinedConstellation::kNumPoints; ++i) {
    for (int j = i + 1; j < CombinedConstellation::kNumPoints; ++j) {
      if (std::abs(c.points[i] - c.points[j]) < 1e-9) {
        throw AmbiguityError("build_combined: coincident points s_" +
                                 std::to_string(i + 1) + " and s_" +
                                 std::to_string(j + 1),
                             i, j);
      }
    }
  }
  return c;
}

DistanceSets distance_sets(const CombinedConstellation& c, int bit_position) {
  if (bit_position < 0 || bit_position > 3) {
    throw std::domain_error("distance_sets: bit position must be in 0..3");
  }
  DistanceSets sets;
  int nc = 0, nw = 0;
  for (int n = 0; n < CombinedConstellation::kNumPoints; ++n) {
    if (c.bit(n, bit_position) == 0) {
      sets.correct[nc++] = n;
    } else {
      sets.wrong[nw++] = n;
    }
  }
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      sets.distance(i, j) =
          std::abs(c.points[sets.correct[i]] - c.points[sets.wrong[j]]);
    }
  }
  return sets;
}

int nearest_symbol(const CombinedConstellation& c, std::complex<double> point) {
  if (!std::isfinite(point.real()) || !std::isfinite(point.imag())) {
    throw std::domain_error("nearest_symbol: non-finite point");
  }
  int best = 0;
  double best_d2 = std::norm(point - c.points[0]);
  for (int n = 1; n < CombinedConstellation::kNumPoints; ++n) {
    const double d2 = std::norm(point - c.points[n]);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = n;
    }
  }
  return best;
}

DecisionGeometry decision_geometry(const CombinedConstellation& c) {
  const bool default_config =
      c.convention == RotationConvention::differential &&
      std::abs(c.theta_o - kPi / 4.0) < 1e-12 &&
      std::abs(c.theta_r - kPi / 2.0) < 1e-12;
  if (!default_config) {
    throw GeometryError(
        "decision_geometry: only theta_o = pi/4, theta_r = pi/2 "
        "(differential) is supported");
  }

  std::array<Eigen::Vector2d, 16> p;
  for (int n = 0; n < 16; ++n) p[n] = as_vec(c.points[n]);

  // Boundary vertices: points equidistant from a correct-MSB point, a
  // wrong-MSB point, and a third point, that lie on the global class
  // boundary.  Obtained by intersecting pairs of perpendicular bisectors.
  constexpr double kTol = 1e-9;
  std::vector<Eigen::Vector2d> vertices;
  for (int cc = 0; cc < 8; ++cc) {
    for (int w = 8; w < 16; ++w) {
      const Line l1 = bisector(p[cc], p[w]);
      for (int u = 0; u < 16; ++u) {
        if (u == cc || u == w) continue;
        const Line l2 = bisector(p[cc], p[u]);
        const double det = l1.n.x() * l2.n.y() - l1.n.y() * l2.n.x();
        if (std::abs(det) < 1e-12) continue;
        const Eigen::Vector2d v{
            (l1.rhs * l2.n.y() - l2.rhs * l1.n.y()) / det,
            (l1.n.x() * l2.rhs - l2.n.x() * l1.rhs) / det};
        double d0 = std::numeric_limits<double>::infinity();
        double d1 = std::numeric_limits<double>::infinity();
        for (int n = 0; n < 8; ++n) d0 = std::min(d0, (v - p[n]).norm());
        for (int n = 8; n < 16; ++n) d1 = std::min(d1, (v - p[n]).norm());
        if (std::abs(d0 - d1) > kTol) continue;
        if ((v - p[cc]).norm() > d0 + kTol || (v - p[w]).norm() > d1 + kTol) {
          continue;
        }
        bool duplicate = false;
        for (const auto& known : vertices) {
          if ((known - v).norm() < 1e-6) {
            duplicate = true;
            break;
          }
        }
        if (!duplicate) vertices.push_back(v);
      }
    }
  }
  if (vertices.size() != 7) {
    throw GeometryError("decision_geometry: expected 7 boundary vertices, got " +
                        std::to_string(vertices.size()));
  }

  DecisionGeometry geo{};
  bool found[7] = {};
  for (const auto& v : vertices) {
    const bool on_axis = std::abs(v.y()) < 1e-6;
    int slot;
    if (v.norm() < 1e-6) {
      slot = 0;
      geo.o = v;
    } else if (on_axis && v.x() < 0) {
      slot = 1;
      geo.c = v;
    } else if (on_axis) {
      slot = 2;
      geo.d = v;
    } else if (v.x() < 0 && v.y() > 0) {
      slot = 3;
      geo.a = v;
    } else if (v.x() > 0 && v.y() > 0) {
      slot = 4;
      geo.b = v;
    } else if (v.x() < 0) {
      slot = 5;
      geo.e = v;
    } else {
      slot = 6;
      geo.f = v;
    }
    if (found[slot]) {
      throw GeometryError("decision_geometry: vertex labeling is ambiguous");
    }
    found[slot] = true;
  }
  for (bool ok : found) {
    if (!ok) throw GeometryError("decision_geometry: missing boundary vertex");
  }
  geo.g = {-geo.b.x(), 0.0};
  geo.h = {geo.b.x(), 0.0};

  auto slope = [](const Eigen::Vector2d& from, const Eigen::Vector2d& to) {
    return (to.y() - from.y()) / (to.x() - from.x());
  };
  geo.k_ac = slope(geo.a, geo.c);
  geo.k_bd = slope(geo.b, geo.d);
  geo.k_ce = slope(geo.c, geo.e);
  geo.k_df = slope(geo.d, geo.f);
  geo.k_oa = slope(geo.o, geo.a);
  geo.k_ob = slope(geo.o, geo.b);
  geo.k_oe = slope(geo.o, geo.e);
  geo.k_of = slope(geo.o, geo.f);

  const double checks[] = {
      (geo.b - Eigen::Vector2d(-geo.a.x(), geo.a.y())).norm(),
      (geo.b - Eigen::Vector2d(geo.f.x(), -geo.f.y())).norm(),
      (geo.b - Eigen::Vector2d(-geo.e.x(), -geo.e.y())).norm(),
      std::abs(geo.d.x() + geo.c.x()),
      std::abs(geo.k_ac - geo.k_df),
      std::abs(geo.k_ac + geo.k_bd),
      std::abs(geo.k_ac + geo.k_ce),
      std::abs(geo.k_ob - 1.0),
      std::abs(geo.k_oe - 1.0),
      std::abs(geo.k_oa + 1.0),
      std::abs(geo.k_of + 1.0)};
  for (double err : checks) {
    if (!(err < 1e-9)) {
      throw GeometryError("decision_geometry: symmetry validation failed");
    }
  }
  return geo;
}

bool DecisionGeometry::in_region(int index, double x, double y) const {
  switch (index) {
    case 1:
      return c.x() <= x && x <= a.x() && c.y() <= y &&
             y <= k_ac * (x - c.x());
    case 2:
      return g.x() <= x && x <= o.x() && o.y() <= y &&
             y <= k_oa * (x - o.x());
    case 3:
      return o.x() <= x && x <= h.x() && o.y() <= y &&
             y <= k_ob * (x - o.x());
    case 4:
      return h.x() <= x && x <= d.x() && d.y() <= y &&
             y <= k_bd * (x - d.x());
    case 5:
      return x <= (y - e.y()) / k_ce + e.x() && e.y() <= y && y <= c.y();
    case 6:
      return e.x() <= x && x <= o.x() && e.y() <= y &&
             y <= k_oe * (x - o.x());
    case 7:
      return o.x() <= x && x <= f.x() && f.y() <= y &&
             y <= k_of * (x - o.x());
    case 8:
      return (y - f.y()) / k_df + f.x() <= x && f.y() <= y && y <= d.y();
    case 9:
      return y <= f.y();
    default:
      throw std::domain_error("in_region: index must be in 1..9");
  }
}

bool DecisionGeometry::in_error_region(double x, double y) const {
  for (int i = 1; i <= 9; ++i) {
    if (in_region(i, x, y)) return true;
  }
  return false;
}

}  // namespace nisac
