#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "nisac/channel.hpp"
#include "nisac/constellation.hpp"

namespace nisac {

enum class DistanceMode { fixed, randomized };

/// One transmitted 2T frame: each user sends the two period symbols whose
/// sum is the combined constellation point `symbol[k]`; the radar sends
/// one QPSK symbol twice with alternating polarity.
struct FramePair {
  std::array<int, 2> symbol{};  // combined constellation index per UE
  int radar_symbol = 0;         // QPSK index 0..3
};

FramePair sample_frame(std::mt19937_64& rng);

struct ReceivedPair {
  Eigen::VectorXcd y1, y2;
  Eigen::VectorXcd combined;  // y1 + y2
};

struct SimOptions {
  bool drift_mode = false;    // advance the radar pair index between periods
  double noise_scale = 1.0;   // scales the noise standard deviation
};

ReceivedPair simulate_pair(std::mt19937_64& rng, const SystemParams& params,
                           const CombinedConstellation& c,
                           const FramePair& frame,
                           const ChannelRealization& chan,
                           const RadarChannel& radar,
                           const SimOptions& options = {});

class SingularChannelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ZfDecision {
  std::array<int, 2> symbol{};
  std::array<double, 2> noise_power{};          // P_N per UE
  std::array<std::complex<double>, 2> equalized{};  // input to the per-UE ML step
};

/// Zero-forcing receiver: pseudo-inverse of H, per-UE power normalization,
/// then per-UE nearest-point decision.  Throws SingularChannelError when
/// the channel condition number exceeds 1e12.
ZfDecision zf_receive(const Eigen::VectorXcd& y2t,
                      const ChannelRealization& chan,
                      const SystemParams& params,
                      const CombinedConstellation& c);

/// Joint ML over all 16 x 16 combined-symbol hypotheses; ties resolve to
/// the lexicographically lowest pair.
std::array<int, 2> jml_receive(const Eigen::VectorXcd& y2t,
                               const ChannelRealization& chan,
                               const SystemParams& params,
                               const CombinedConstellation& c);

struct McConfig {
  SystemParams params;
  CombinedConstellation constellation;
  long trials = 1'000'000;
  std::uint64_t seed = 1;
  int workers = 1;
  long block_size = 8192;
  DistanceMode distance_mode = DistanceMode::fixed;
  bool drift_mode = false;
};

struct ProportionStats {
  long events = 0;
  long total = 0;
  double ratio() const { return total ? double(events) / double(total) : 0.0; }
  double ci_half_width() const;  // 95% Wilson interval
  void add(const ProportionStats& other) {
    events += other.events;
    total += other.total;
  }
};

using BerStats = ProportionStats;
using OutageStats = ProportionStats;

struct BerResult {
  // indexed [receiver][ue], receiver 0 = ZF, 1 = JML
  std::array<std::array<BerStats, 2>, 2> stats{};
  long singular_events = 0;
  std::uint64_t decision_hash = 0;  // order-stable digest of all decisions
};

/// Monte-Carlo BER over `trials` frame pairs.  Trials are partitioned
/// into fixed-size blocks, each with its own seed-derived RNG stream, so
/// results are bit-identical for any worker count.
BerResult run_ber(const McConfig& config, bool run_zf = true,
                  bool run_jml = true);

struct OutageResult {
  std::array<std::array<OutageStats, 2>, 2> stats{};  // [receiver][ue]
  std::array<OutageStats, 2> system{};                // mean over the two UEs
};

/// Monte-Carlo outage probability at target rate C (bits per 2T use).
OutageResult run_outage(const McConfig& config, double rate_threshold);

/// Deterministic per-block RNG stream id (splitmix64 of seed and block).
std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t block);

}  // namespace nisac
