#include "nisac/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace nisac {
namespace {

bool is_nonpositive_integer(double v) {
  return v <= 0.0 && v == std::floor(v);
}

// 2F1 power series at z, |z| < 1.  Terminates early when one of the
// numerator parameters is a non-positive integer.
double hyp2f1_series(double a, double b, double c, double z) {
  constexpr int kMaxTerms = 2'000'000;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < kMaxTerms; ++k) {
    term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z;
    if (term == 0.0) return sum;
    sum += term;
    if (std::abs(term) <= 1e-16 * std::abs(sum) && k > 2) return sum;
  }
  throw NumericError("gauss_2f1: series failed to converge", sum);
}

// --- Gauss-Kronrod 15-point rule (7-point Gauss embedded) ---------------

constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Segment {
  double lo, hi, value, error;
};

Segment gk15(const std::function<double(double)>& f, double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(mid);
  double kron = kKronrodWeights[7] * fc;
  double gauss = kGaussWeights[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double fsum = f(mid - dx) + f(mid + dx);
    kron += kKronrodWeights[i] * fsum;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * fsum;
  }
  kron *= half;
  gauss *= half;
  return {lo, hi, kron, std::abs(kron - gauss)};
}

double adaptive_gk(const std::function<double(double)>& f, double lo, double hi,
                   const QuadratureSettings& s, int initial_panels) {
  std::vector<Segment> segs;
  segs.reserve(static_cast<size_t>(initial_panels) + 2 * s.max_subdivisions);
  const double step = (hi - lo) / initial_panels;
  for (int i = 0; i < initial_panels; ++i) {
    segs.push_back(gk15(f, lo + i * step, lo + (i + 1) * step));
  }
  for (int split = 0;; ++split) {
    double total = 0.0, err = 0.0;
    size_t worst = 0;
    for (size_t i = 0; i < segs.size(); ++i) {
      total += segs[i].value;
      err += segs[i].error;
      if (segs[i].error > segs[worst].error) worst = i;
    }
    if (err <= std::max(s.abs_tol, s.rel_tol * std::abs(total))) return total;
    if (split >= s.max_subdivisions) {
      throw NumericError("integrate: tolerance not met within max_subdivisions",
                         total);
    }
    const Segment w = segs[worst];
    const double mid = 0.5 * (w.lo + w.hi);
    segs[worst] = gk15(f, w.lo, mid);
    segs.push_back(gk15(f, mid, w.hi));
  }
}

}  // namespace

void QuadratureSettings::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw std::domain_error("QuadratureSettings: tolerances must be > 0");
  }
  if (max_subdivisions < 1) {
    throw std::domain_error("QuadratureSettings: max_subdivisions must be >= 1");
  }
  if (semi_infinite_nodes < 8) {
    throw std::domain_error("QuadratureSettings: semi_infinite_nodes must be >= 8");
  }
}

double q_function(double x) {
  if (!std::isfinite(x)) {
    throw std::domain_error("q_function: non-finite argument");
  }
  return 0.5 * std::erfc(x / std::sqrt(2.0));
}

double regularized_gamma(double a, double x, GammaTail tail) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw std::domain_error("regularized_gamma: a must be > 0");
  }
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw std::domain_error("regularized_gamma: x must be >= 0");
  }
  if (x == 0.0) return tail == GammaTail::lower ? 0.0 : 1.0;

  const double log_prefactor = a * std::log(x) - x - std::lgamma(a);
  if (x < a + 1.0) {
    // Lower series: P(a,x) = x^a e^-x / Gamma(a) * sum x^n / (a)_{n+1}.
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 10000; ++n) {
      term *= x / (a + n);
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-17) break;
    }
    const double lower = std::exp(log_prefactor) * sum;
    return tail == GammaTail::lower ? lower : 1.0 - lower;
  }
  // Upper continued fraction (modified Lentz).
  const double tiny = std::numeric_limits<double>::min() * 1e10;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-17) break;
  }
  const double upper = std::exp(log_prefactor) * h;
  return tail == GammaTail::upper ? upper : 1.0 - upper;
}

double gauss_2f1(double a, double b, double c, double z) {
  if (is_nonpositive_integer(c)) {
    throw std::domain_error("gauss_2f1: c must not be a non-positive integer");
  }
  if (!(z <= 0.0)) {
    throw std::domain_error("gauss_2f1: argument must satisfy z <= 0");
  }
  if (z == 0.0) return 1.0;
  if (z >= -0.9) return hyp2f1_series(a, b, c, z);
  // Pfaff: 2F1(a,b;c;z) = (1-z)^-a 2F1(a, c-b; c; z/(z-1)).  Prefer the
  // variant whose transformed series terminates.
  const double w = z / (z - 1.0);
  if (is_nonpositive_integer(c - a) && !is_nonpositive_integer(c - b)) {
    return std::pow(1.0 - z, -b) * hyp2f1_series(b, c - a, c, w);
  }
  return std::pow(1.0 - z, -a) * hyp2f1_series(a, c - b, c, w);
}

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const QuadratureSettings& settings) {
  settings.validate();
  if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw std::domain_error("integrate: invalid interval");
  }
  if (lo == hi) return 0.0;
  return adaptive_gk(f, lo, hi, settings, 8);
}

double integrate_half_line(const std::function<double(double)>& f,
                           const QuadratureSettings& settings) {
  settings.validate();
  auto g = [&f](double t) {
    const double u = 1.0 - t;
    const double x = t / u;
    if (!std::isfinite(x)) return 0.0;
    const double v = f(x);
    return v / (u * u);
  };
  const int panels = std::max(2, settings.semi_infinite_nodes / 15);
  return adaptive_gk(g, 0.0, 1.0, settings, panels);
}

}  // namespace nisac
