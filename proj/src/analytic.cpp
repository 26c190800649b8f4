#include "nisac/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <unordered_map>
#include <vector>

namespace nisac {
namespace {

double gaussian_kernel(double t, double mean, double noise_power) {
  return std::exp(-(t - mean) * (t - mean) / noise_power) /
         std::sqrt(std::numbers::pi * noise_power);
}

// E[Q(sqrt(delta))] for delta ~ Erlang(shape M, scale eta).  The eta -> 0
// limit is a point mass at zero, where Q(0) = 1/2.
double erlang_q_average(int m, double eta) {
  if (eta == 0.0) return 0.5;
  const double log_front = std::lgamma(2.0 * m) - std::lgamma(m) -
                           std::lgamma(m + 1.0) - m * std::log(2.0 * eta);
  return std::exp(log_front) * gauss_2f1(m, m + 0.5, m + 1.0, -2.0 / eta);
}

// E[Q(A / sqrt(chi))] for chi ~ InvGamma(shape a, scale b).
double inv_gamma_q_average(double amplitude, double shape, double scale) {
  if (amplitude == 0.0) return 0.5;
  const double z = -amplitude * amplitude / (2.0 * scale);
  const double front = std::exp(std::lgamma(0.5 + shape) - std::lgamma(shape)) /
                       std::sqrt(2.0 * std::numbers::pi * scale);
  return 0.5 - amplitude * front * gauss_2f1(0.5, 0.5 + shape, 1.5, z);
}

}  // namespace

InverseGammaParams InverseGammaParams::from(const SystemParams& params, int ue) {
  const double shape = params.antennas - SystemParams::kUsers + 1;
  if (shape < 1.0) {
    throw std::domain_error("InverseGammaParams: requires antennas >= users");
  }
  return {shape, 1.0 / params.beta(ue)};
}

GammaParams GammaParams::from(const SystemParams& params, int ue) {
  return {static_cast<double>(params.antennas), 1.0 / params.beta(ue)};
}

double ErlangParams::pdf(double x) const {
  if (x < 0.0) return 0.0;
  return std::exp((shape - 1) * std::log(x) - x / eta - std::lgamma(shape) -
                  shape * std::log(eta));
}

RateThreshold RateThreshold::from(const SystemParams& params, int ue,
                                  double C) {
  constexpr double kCombinedSymbolEnergy = 2.0;
  const double snr_scale =
      params.ue_power(ue) * kCombinedSymbolEnergy /
      (2.0 * params.noise_variance());
  const double growth = std::exp2(C) - 1.0;
  return {C, snr_scale / growth, growth / snr_scale};
}

double conditional_ber_zf(double noise_power, const DecisionGeometry& geometry,
                          const CombinedConstellation& c,
                          const QuadratureSettings& settings) {
  if (!(noise_power > 0.0)) {
    throw std::domain_error("conditional_ber_zf: noise power must be > 0");
  }
  const double rho = std::sqrt(noise_power / 2.0);
  const double a_b = geometry.b.x();
  const double b_b = geometry.b.y();
  const double a_d = geometry.d.x();
  const double k_ac = geometry.k_ac;

  // Restrict each 1-D integral to the kernel's effective support; the
  // discarded tail mass is below Q(40) ~ 1e-349, and without the clamp
  // the adaptive rule can miss the narrow Gaussian spike entirely when
  // rho is tiny relative to the constellation scale.
  const double reach40 = 40.0 * rho;
  const auto clamped_integral =
      [&](double lo, double hi, double center,
          const std::function<double(double)>& f) {
        lo = std::max(lo, center - reach40);
        hi = std::min(hi, center + reach40);
        if (!(lo < hi)) return 0.0;
        return integrate(f, lo, hi, settings);
      };

  double total = 0.0;
  for (int n = 0; n < 8; ++n) {
    const double a_n = c.points[n].real();
    const double b_n = c.points[n].imag();

    // Half-plane below F plus the constant parts of the boundary pockets.
    double p = q_function((b_n + b_b) / rho);
    p += q_function(-b_n / rho) *
         (1.0 - q_function((a_d + a_n) / rho) - q_function((a_d - a_n) / rho));
    p -= q_function((b_b + b_n) / rho) *
         (1.0 - q_function((a_b + a_n) / rho) - q_function((a_b - a_n) / rho));

    // Pockets between the slope-1 lines and the horizontal axis.
    p += clamped_integral(-a_b, a_b, a_n, [&](double a) {
      const double mag = std::abs(a);
      return gaussian_kernel(a, a_n, noise_power) *
             (q_function((mag + b_n) / rho) - q_function((mag - b_n) / rho));
    });
    // Sloped caps AC and BD.
    p -= clamped_integral(-a_d, -a_b, a_n, [&](double a) {
      return gaussian_kernel(a, a_n, noise_power) *
             q_function((k_ac * (a + a_d) - b_n) / rho);
    });
    p -= clamped_integral(a_b, a_d, a_n, [&](double a) {
      return gaussian_kernel(a, a_n, noise_power) *
             q_function((k_ac * (a_d - a) - b_n) / rho);
    });
    // Wings beyond the CE and DF lines within the lower strip.
    p += clamped_integral(-b_b, 0.0, b_n, [&](double b) {
      const double reach = (b + b_b) / k_ac + a_b;
      return gaussian_kernel(b, b_n, noise_power) *
             (q_function((reach + a_n) / rho) +
              q_function((reach - a_n) / rho));
    });
    total += p;
  }
  return total / 8.0;
}

double conditional_ber_oracle(double noise_power,
                              const CombinedConstellation& c,
                              int bit_position) {
  if (!(noise_power > 0.0)) {
    throw std::domain_error("conditional_ber_oracle: noise power must be > 0");
  }
  const DistanceSets sets = distance_sets(c, bit_position);
  const double sigma = std::sqrt(noise_power / 2.0);
  const double step = sigma / 200.0;
  const int half_steps = 8 * 200;

  std::array<double, 16> px, py;
  std::array<bool, 16> wrong{};
  for (int n = 0; n < 16; ++n) {
    px[n] = c.points[n].real();
    py[n] = c.points[n].imag();
  }
  for (int w : sets.wrong) wrong[w] = true;

  // Cell centers are offset by half a step from the symbol so that axis-
  // aligned decision boundaries (which sit at integer multiples of the
  // step for the default geometry) fall on cell edges rather than through
  // the sample points; this removes the dominant discretization bias.
  const int grid = 2 * half_steps;
  std::vector<double> offset(grid), weight(grid);
  for (int i = 0; i < grid; ++i) {
    offset[i] = (i - half_steps + 0.5) * step;
    weight[i] = std::exp(-offset[i] * offset[i] / noise_power) * step /
                std::sqrt(std::numbers::pi * noise_power);
  }

  const auto wrong_at = [&](double x, double y) {
    double best = (x - px[0]) * (x - px[0]) + (y - py[0]) * (y - py[0]);
    int arg = 0;
    for (int n = 1; n < 16; ++n) {
      const double d2 = (x - px[n]) * (x - px[n]) + (y - py[n]) * (y - py[n]);
      if (d2 < best) {
        best = d2;
        arg = n;
      }
    }
    return wrong[arg];
  };
  const double density_norm = 1.0 / (std::numbers::pi * noise_power);

  double total = 0.0;
  std::vector<std::uint8_t> klass(static_cast<std::size_t>(grid) * grid);
  for (int correct : sets.correct) {
    const double cx = px[correct];
    const double cy = py[correct];
    for (int iy = 0; iy < grid; ++iy) {
      const double y = cy + offset[iy];
      for (int ix = 0; ix < grid; ++ix) {
        klass[std::size_t(iy) * grid + ix] = wrong_at(cx + offset[ix], y);
      }
    }
    // Coarse pass: whole-cell mass by the center classification.
    double acc = 0.0;
    for (int iy = 0; iy < grid; ++iy) {
      double row = 0.0;
      for (int ix = 0; ix < grid; ++ix) {
        if (klass[std::size_t(iy) * grid + ix]) row += weight[ix];
      }
      acc += row * weight[iy];
    }
    // Refinement: cells whose classification differs from a neighbor are
    // crossed by a decision boundary; re-integrate them on a finer
    // sub-grid to suppress the half-cell discretization error.
    constexpr int kSub = 16;
    const double sub_step = step / kSub;
    for (int iy = 0; iy < grid; ++iy) {
      for (int ix = 0; ix < grid; ++ix) {
        const bool me = klass[std::size_t(iy) * grid + ix];
        const bool boundary =
            (ix > 0 && klass[std::size_t(iy) * grid + ix - 1] != me) ||
            (ix + 1 < grid && klass[std::size_t(iy) * grid + ix + 1] != me) ||
            (iy > 0 && klass[std::size_t(iy - 1) * grid + ix] != me) ||
            (iy + 1 < grid && klass[std::size_t(iy + 1) * grid + ix] != me);
        if (!boundary) continue;
        if (me) acc -= weight[ix] * weight[iy];
        double fine = 0.0;
        for (int sy = 0; sy < kSub; ++sy) {
          const double y =
              cy + offset[iy] + (sy - kSub / 2 + 0.5) * sub_step;
          for (int sx = 0; sx < kSub; ++sx) {
            const double x =
                cx + offset[ix] + (sx - kSub / 2 + 0.5) * sub_step;
            if (wrong_at(x, y)) {
              const double tx = x - cx, ty = y - cy;
              fine += std::exp(-(tx * tx + ty * ty) / noise_power);
            }
          }
        }
        acc += fine * density_norm * sub_step * sub_step;
      }
    }
    total += acc;
  }
  return total / 8.0;
}

double semi_analytic_ber_zf(const SystemParams& params,
                            const CombinedConstellation& c, int ue,
                            const QuadratureSettings& settings) {
  const InverseGammaParams inv_gamma = InverseGammaParams::from(params, ue);
  const DecisionGeometry geometry = decision_geometry(c);
  const double noise_scale =
      2.0 * params.noise_variance() / params.ue_power(ue);
  const double log_gamma_shape = std::lgamma(inv_gamma.shape);

  QuadratureSettings outer = settings;
  outer.abs_tol = std::max(settings.abs_tol, 1e-12);
  outer.rel_tol = std::max(settings.rel_tol, 1e-8);
  // chi = scale/u turns the inverse-Gamma weight into a Gamma(shape) one.
  return integrate_half_line(
      [&](double u) {
        if (u <= 0.0) return 0.0;
        const double log_weight =
            (inv_gamma.shape - 1.0) * std::log(u) - u - log_gamma_shape;
        if (log_weight < -700.0) return 0.0;
        const double chi = inv_gamma.scale / u;
        const double ber =
            conditional_ber_zf(noise_scale * chi, geometry, c, settings);
        return ber * std::exp(log_weight);
      },
      outer);
}

BoundValue upper_ber_zf(const SystemParams& params,
                        const CombinedConstellation& c, int ue) {
  const InverseGammaParams inv_gamma = InverseGammaParams::from(params, ue);
  const DistanceSets sets = distance_sets(c, 0);
  const double snr = params.ue_power(ue) / (4.0 * params.noise_variance());
  double sum = 0.0;
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      const double d = sets.distance(i, j);
      const double amplitude = std::sqrt(snr) * d;
      sum += inv_gamma_q_average(amplitude, inv_gamma.shape, inv_gamma.scale);
    }
  }
  const double raw = sum / 8.0;
  return {raw, std::clamp(raw, 0.0, 1.0)};
}

BoundValue upper_ber_jml(const SystemParams& params,
                         const CombinedConstellation& c, int ue,
                         JmlBoundMode mode) {
  const int m = params.antennas;
  const int other = 1 - ue;
  const double own_gain = params.ue_power(ue) * params.beta(ue);
  const double other_gain = params.ue_power(other) * params.beta(other);
  const double quarter_sigma2 = 4.0 * params.noise_variance();
  const DistanceSets sets = distance_sets(c, 0);

  // eta takes few distinct values across the 16384 terms; cache on its
  // bit pattern.
  std::unordered_map<std::uint64_t, double> cache;
  auto term = [&](double eta) {
    std::uint64_t key;
    static_assert(sizeof(key) == sizeof(eta));
    std::memcpy(&key, &eta, sizeof(key));
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const double value = erlang_q_average(m, eta);
    cache.emplace(key, value);
    return value;
  };

  double sum = 0.0;
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      const double d2 = sets.distance(i, j) * sets.distance(i, j);
      for (int p = 0; p < 16; ++p) {
        for (int q = 0; q < 16; ++q) {
          const double d2_pq = std::norm(c.points[p] - c.points[q]);
          const double eta =
              (own_gain * d2 + other_gain * d2_pq) / quarter_sigma2;
          sum += term(eta);
        }
      }
    }
  }
  const double raw =
      mode == JmlBoundMode::as_printed ? sum / 8.0 : sum / (8.0 * 16.0);
  return {raw, std::clamp(raw, 0.0, 1.0)};
}

double outage_zf(const SystemParams& params, int ue, double C) {
  if (C <= 0.0) return 0.0;
  const InverseGammaParams inv_gamma = InverseGammaParams::from(params, ue);
  const RateThreshold threshold = RateThreshold::from(params, ue, C);
  return regularized_gamma(inv_gamma.shape, inv_gamma.scale / threshold.r_zf,
                           GammaTail::lower);
}

double outage_jml(const SystemParams& params, int ue, double C) {
  if (C <= 0.0) return 0.0;
  const GammaParams gamma = GammaParams::from(params, ue);
  const RateThreshold threshold = RateThreshold::from(params, ue, C);
  return regularized_gamma(gamma.shape, gamma.rate * threshold.r_jml,
                           GammaTail::lower);
}

}  // namespace nisac
