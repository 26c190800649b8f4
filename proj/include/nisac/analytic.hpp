#pragma once

#include "nisac/channel.hpp"
#include "nisac/constellation.hpp"
#include "nisac/specfun.hpp"

namespace nisac {

/// Distribution of the ZF noise-enhancement factor [(H^H H)^-1]_{k,k}.
struct InverseGammaParams {
  double shape;  // M - K + 1
  double scale;  // 1 / beta_k

  static InverseGammaParams from(const SystemParams& params, int ue);
};

/// Distribution of ||h_k||^2.
struct GammaParams {
  double shape;  // M
  double rate;   // 1 / beta_k

  static GammaParams from(const SystemParams& params, int ue);
};

/// Distribution of the scaled pairwise-distance statistic of the JML bound.
struct ErlangParams {
  int shape;   // M
  double eta;  // (P_k b_k |s_c-s_w|^2 + P_j b_j |s_p-s_q|^2) / (4 sigma^2)

  double pdf(double x) const;
};

/// Rate thresholds on the channel statistics implied by a target rate C
/// (bits per 2T channel use) with E|x'|^2 = 2.
struct RateThreshold {
  double target_rate;
  double r_zf;   // outage when [(H^H H)^-1]_{k,k} > r_zf
  double r_jml;  // outage when ||h_k||^2 < r_jml

  static RateThreshold from(const SystemParams& params, int ue, double C);
};

/// Exact BER of the per-UE ML stage at noise power P_N, evaluated from the
/// decision-boundary geometry: closed Q-function products plus four 1-D
/// integrals of Q-weighted Gaussian kernels over the boundary segments.
double conditional_ber_zf(double noise_power, const DecisionGeometry& geometry,
                          const CombinedConstellation& c,
                          const QuadratureSettings& settings = {});

/// Independent check on conditional_ber_zf: integrates the isotropic
/// Gaussian density over the wrong-bit nearest-symbol region on a uniform
/// grid of step sqrt(P_N/2)/200 within an 8-sigma square around each
/// correct symbol.  Absolute accuracy around 1e-5.
double conditional_ber_oracle(double noise_power,
                              const CombinedConstellation& c,
                              int bit_position);

/// conditional_ber_zf averaged over the inverse-Gamma law of the noise
/// enhancement, via the Gamma-weighted substitution u = scale / chi.
double semi_analytic_ber_zf(const SystemParams& params,
                            const CombinedConstellation& c, int ue,
                            const QuadratureSettings& settings = {});

/// A union bound, reported unclamped (so bound algebra stays testable)
/// with a clamped-to-[0,1] companion.
struct BoundValue {
  double raw;
  double clamped;
};

/// Closed-form ZF union bound: pairwise Q terms averaged over the
/// inverse-Gamma noise enhancement, expressed through 2F1.
BoundValue upper_ber_zf(const SystemParams& params,
                        const CombinedConstellation& c, int ue);

/// `as_printed` keeps the plain sum over the interferer's true symbol;
/// `averaged` adds the uniform 1/16 weight over it.
enum class JmlBoundMode { as_printed, averaged };

/// Closed-form JML union bound: pairwise Q terms averaged over the Erlang
/// law of the joint-distance statistic, expressed through 2F1.
BoundValue upper_ber_jml(const SystemParams& params,
                         const CombinedConstellation& c, int ue,
                         JmlBoundMode mode = JmlBoundMode::as_printed);

/// Closed-form outage probabilities at target rate C (bits per 2T use).
double outage_zf(const SystemParams& params, int ue, double C);
double outage_jml(const SystemParams& params, int ue, double C);

}  // namespace nisac
