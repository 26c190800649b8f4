#include "nisac/sim.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

namespace nisac {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::uint64_t hash, std::uint64_t value) {
  for (int i = 0; i < 8; ++i) {
    hash ^= (value >> (8 * i)) & 0xff;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;

// Runs fn(block_index) for every block on `workers` threads; the caller
// must make per-block outputs independent so reduction order is fixed.
void parallel_blocks(long num_blocks, int workers,
                     const std::function<void(long)>& fn) {
  if (workers <= 1) {
    for (long b = 0; b < num_blocks; ++b) fn(b);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (long b = next.fetch_add(1); b < num_blocks; b = next.fetch_add(1)) {
        fn(b);
      }
    });
  }
  for (auto& t : pool) t.join();
}

SystemParams block_params(const McConfig& config, std::mt19937_64& rng) {
  SystemParams p = config.params;
  if (config.distance_mode == DistanceMode::randomized) {
    std::uniform_real_distribution<double> dist(30.0, 80.0);
    p.d1 = dist(rng);
    p.d2 = 1.2 * p.d1;
  }
  return p;
}

}  // namespace

std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t block) {
  return splitmix64(splitmix64(seed) ^ splitmix64(block + 0x51ed2701a2b5f2e3ULL));
}

FramePair sample_frame(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> sym(0, 15);
  std::uniform_int_distribution<int> radar(0, 3);
  FramePair frame;
  frame.symbol = {sym(rng), sym(rng)};
  frame.radar_symbol = radar(rng);
  return frame;
}

ReceivedPair simulate_pair(std::mt19937_64& rng, const SystemParams& params,
                           const CombinedConstellation& c,
                           const FramePair& frame,
                           const ChannelRealization& chan,
                           const RadarChannel& radar,
                           const SimOptions& options) {
  const int m = static_cast<int>(chan.H.rows());
  const double sqrt_pr = std::sqrt(params.p_radar);
  const std::complex<double> s_r =
      std::polar(1.0, frame.radar_symbol * std::numbers::pi / 2.0 +
                          params.theta_o);
  const std::complex<double> g1 = radar.coeff;
  const std::complex<double> g2 =
      options.drift_mode ? radar_channel(params, radar.pair_index + 1).coeff
                         : g1;
  const double sigma2 = params.noise_variance() * options.noise_scale *
                        options.noise_scale;

  ReceivedPair out;
  out.y1.resize(m);
  out.y2.resize(m);
  for (int i = 0; i < m; ++i) {
    std::complex<double> v1 = sqrt_pr * g1 * s_r;
    std::complex<double> v2 = -sqrt_pr * g2 * s_r;
    for (int k = 0; k < SystemParams::kUsers; ++k) {
      const double amp = std::sqrt(params.ue_power(k));
      v1 += amp * chan.H(i, k) * c.period_symbols[frame.symbol[k]][0];
      v2 += amp * chan.H(i, k) * c.period_symbols[frame.symbol[k]][1];
    }
    if (sigma2 > 0.0) {
      v1 += sample_noise(rng, sigma2);
      v2 += sample_noise(rng, sigma2);
    }
    out.y1[i] = v1;
    out.y2[i] = v2;
  }
  out.combined = out.y1 + out.y2;
  return out;
}

ZfDecision zf_receive(const Eigen::VectorXcd& y2t,
                      const ChannelRealization& chan,
                      const SystemParams& params,
                      const CombinedConstellation& c) {
  const Eigen::Matrix2cd gram = chan.H.adjoint() * chan.H;
  // Condition number from the 2x2 Gram eigenvalues.
  const double tr = gram(0, 0).real() + gram(1, 1).real();
  const double det = (gram(0, 0) * gram(1, 1) - gram(0, 1) * gram(1, 0)).real();
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  const double lam_max = tr / 2.0 + disc;
  const double lam_min = tr / 2.0 - disc;
  if (!(lam_min > 0.0) ||
      std::sqrt(lam_max / lam_min) > 1e12) {
    throw SingularChannelError("zf_receive: channel matrix is numerically singular");
  }
  const Eigen::Matrix2cd gram_inv = gram.inverse();
  const Eigen::Vector2cd filtered = gram_inv * (chan.H.adjoint() * y2t);
  const double sigma2 = params.noise_variance();

  ZfDecision decision;
  for (int k = 0; k < SystemParams::kUsers; ++k) {
    const double p_k = params.ue_power(k);
    decision.equalized[k] = filtered(k) / std::sqrt(p_k);
    decision.noise_power[k] = 2.0 * sigma2 * gram_inv(k, k).real() / p_k;
    decision.symbol[k] = nearest_symbol(c, decision.equalized[k]);
  }
  return decision;
}

std::array<int, 2> jml_receive(const Eigen::VectorXcd& y2t,
                               const ChannelRealization& chan,
                               const SystemParams& params,
                               const CombinedConstellation& c) {
  // ||y - sqrt(P1) s_a h1 - sqrt(P2) s_b h2||^2 expanded through the Gram
  // quantities of (h1, h2, y); the constant ||y||^2 is dropped.
  const auto h1 = chan.H.col(0);
  const auto h2 = chan.H.col(1);
  const double a1 = std::sqrt(params.ue_power(0));
  const double a2 = std::sqrt(params.ue_power(1));
  const double g11 = h1.squaredNorm();
  const double g22 = h2.squaredNorm();
  const std::complex<double> g12 = h1.dot(h2);
  const std::complex<double> z1 = h1.dot(y2t);
  const std::complex<double> z2 = h2.dot(y2t);

  std::array<int, 2> best{0, 0};
  double best_metric = std::numeric_limits<double>::infinity();
  for (int a = 0; a < CombinedConstellation::kNumPoints; ++a) {
    const std::complex<double> sa = c.points[a];
    const double part_a =
        a1 * a1 * std::norm(sa) * g11 - 2.0 * a1 * std::real(std::conj(sa) * z1);
    const std::complex<double> cross_a = std::conj(sa) * g12;
    for (int b = 0; b < CombinedConstellation::kNumPoints; ++b) {
      const std::complex<double> sb = c.points[b];
      const double metric = part_a + a2 * a2 * std::norm(sb) * g22 -
                            2.0 * a2 * std::real(std::conj(sb) * z2) +
                            2.0 * a1 * a2 * std::real(cross_a * sb);
      if (metric < best_metric) {
        best_metric = metric;
        best = {a, b};
      }
    }
  }
  return best;
}

double ProportionStats::ci_half_width() const {
  if (total == 0) return 0.0;
  constexpr double z = 1.959963984540054;  // 97.5% normal quantile
  const double n = static_cast<double>(total);
  const double p = ratio();
  const double denom = 1.0 + z * z / n;
  return z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
}

BerResult run_ber(const McConfig& config, bool run_zf, bool run_jml) {
  if (config.trials < 1) throw std::domain_error("run_ber: trials must be >= 1");
  config.params.validate();
  const long num_blocks =
      (config.trials + config.block_size - 1) / config.block_size;

  struct BlockOut {
    std::array<std::array<BerStats, 2>, 2> stats{};
    long singular = 0;
    std::uint64_t hash = kFnvOffset;
  };
  std::vector<BlockOut> blocks(num_blocks);

  parallel_blocks(num_blocks, config.workers, [&](long b) {
    std::mt19937_64 rng(derive_stream(config.seed, b));
    SystemParams params = block_params(config, rng);
    const long first = b * config.block_size;
    const long count = std::min(config.block_size, config.trials - first);
    BlockOut& out = blocks[b];
    for (long t = 0; t < count; ++t) {
      FramePair frame;
      ChannelRealization chan;
      ReceivedPair rx;
      ZfDecision zf;
      bool zf_ok = false;
      for (int attempt = 0; attempt < 64 && !zf_ok; ++attempt) {
        frame = sample_frame(rng);
        chan = sample_comm_channel(rng, params);
        const RadarChannel radar = radar_channel(params, first + t);
        rx = simulate_pair(rng, params, config.constellation, frame, chan,
                           radar, {.drift_mode = config.drift_mode});
        try {
          zf = zf_receive(rx.combined, chan, params, config.constellation);
          zf_ok = true;
        } catch (const SingularChannelError&) {
          ++out.singular;
        }
      }
      if (!zf_ok) continue;  // vanishing probability; drop the trial

      std::array<int, 2> jml{};
      if (run_jml) {
        jml = jml_receive(rx.combined, chan, params, config.constellation);
      }
      for (int k = 0; k < 2; ++k) {
        const std::string& sent = config.constellation.labels[frame.symbol[k]];
        if (run_zf) {
          const std::string& got = config.constellation.labels[zf.symbol[k]];
          for (int bit = 0; bit < 4; ++bit) {
            out.stats[0][k].events += sent[bit] != got[bit];
          }
          out.stats[0][k].total += 4;
          out.hash = fnv1a(out.hash, zf.symbol[k]);
        }
        if (run_jml) {
          const std::string& got = config.constellation.labels[jml[k]];
          for (int bit = 0; bit < 4; ++bit) {
            out.stats[1][k].events += sent[bit] != got[bit];
          }
          out.stats[1][k].total += 4;
          out.hash = fnv1a(out.hash, jml[k]);
        }
      }
    }
  });

  BerResult result;
  result.decision_hash = kFnvOffset;
  for (const BlockOut& out : blocks) {
    for (int r = 0; r < 2; ++r) {
      for (int k = 0; k < 2; ++k) result.stats[r][k].add(out.stats[r][k]);
    }
    result.singular_events += out.singular;
    result.decision_hash = fnv1a(result.decision_hash, out.hash);
  }
  return result;
}

OutageResult run_outage(const McConfig& config, double rate_threshold) {
  if (config.trials < 1) {
    throw std::domain_error("run_outage: trials must be >= 1");
  }
  if (!(rate_threshold >= 0.0)) {
    throw std::domain_error("run_outage: rate threshold must be >= 0");
  }
  config.params.validate();
  const long num_blocks =
      (config.trials + config.block_size - 1) / config.block_size;

  struct BlockOut {
    std::array<std::array<long, 2>, 2> events{};
    long trials = 0;
  };
  std::vector<BlockOut> blocks(num_blocks);
  constexpr double kCombinedSymbolEnergy = 2.0;  // E|x'_k|^2

  parallel_blocks(num_blocks, config.workers, [&](long b) {
    std::mt19937_64 rng(derive_stream(config.seed, b));
    SystemParams params = block_params(config, rng);
    const double sigma2_2t = 2.0 * params.noise_variance();
    const long first = b * config.block_size;
    const long count = std::min(config.block_size, config.trials - first);
    BlockOut& out = blocks[b];
    for (long t = 0; t < count; ++t) {
      const ChannelRealization chan = sample_comm_channel(rng, params);
      const Eigen::Matrix2cd gram = chan.H.adjoint() * chan.H;
      const Eigen::Matrix2cd gram_inv = gram.inverse();
      ++out.trials;
      for (int k = 0; k < 2; ++k) {
        const double p_k = params.ue_power(k);
        const double rate_zf = std::log2(
            1.0 + p_k * kCombinedSymbolEnergy /
                      (gram_inv(k, k).real() * sigma2_2t));
        const double rate_jml = std::log2(
            1.0 + p_k * kCombinedSymbolEnergy * gram(k, k).real() / sigma2_2t);
        out.events[0][k] += rate_zf < rate_threshold;
        out.events[1][k] += rate_jml < rate_threshold;
      }
    }
  });

  OutageResult result;
  for (const BlockOut& out : blocks) {
    for (int r = 0; r < 2; ++r) {
      for (int k = 0; k < 2; ++k) {
        result.stats[r][k].events += out.events[r][k];
        result.stats[r][k].total += out.trials;
      }
    }
  }
  for (int r = 0; r < 2; ++r) {
    result.system[r].events = result.stats[r][0].events + result.stats[r][1].events;
    result.system[r].total = result.stats[r][0].total + result.stats[r][1].total;
  }
  return result;
}

}  // namespace nisac
