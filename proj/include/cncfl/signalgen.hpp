#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "cncfl/types.hpp"

namespace cncfl {

struct Pulse {
  Eigen::Index start = 0;
  Eigen::Index width = 1;
  double amplitude = 0.0;
};

/// Sparse pulse train on a zero baseline. Pulses must lie inside [0, length)
/// and must not overlap.
struct PulseSpec {
  Eigen::Index length = 0;
  std::vector<Pulse> pulses;
};

/// Additive white Gaussian noise with a reproducible stream.
struct NoiseSpec {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

/// SplitMix64 generator. The word sequence is fixed by the seed on every
/// platform, which keeps generated fixtures portable.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

private:
  std::uint64_t state_;
};

/// Standard normal deviates by Box-Muller on pairs of uniforms; both values
/// of each pair are emitted, cosine branch first.
class GaussianStream {
public:
  explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}
  double next();

private:
  SplitMix64 rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Five pulses on N = 300 samples: narrow and wide, positive and negative.
PulseSpec default_pulse_spec();

void validate(const PulseSpec &spec);

Signal generate_pulses(const PulseSpec &spec);

/// sigma * w for the first n deviates of the seeded stream.
Signal gaussian_noise(Eigen::Index n, const NoiseSpec &noise);

/// x + w. sigma == 0 returns x unchanged.
Signal add_awgn(const Eigen::Ref<const Signal> &x, const NoiseSpec &noise);

/// beta * sqrt(N) * sigma.
double lambda1_heuristic(Eigen::Index n, double sigma, double beta = 0.25);

double rmse(const Eigen::Ref<const Signal> &x,
            const Eigen::Ref<const Signal> &reference);

} // namespace cncfl
