#include "cncfl/signalgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cncfl/errors.hpp"

namespace cncfl {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double GaussianStream::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = 0.0, u2 = 0.0;
  do {
    u1 = rng_.uniform();
    u2 = rng_.uniform();
  } while (u1 == 0.0);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

PulseSpec default_pulse_spec() {
  return PulseSpec{300,
                   {{30, 15, 2.0},
                    {90, 8, -1.5},
                    {140, 30, 1.0},
                    {210, 5, 3.0},
                    {250, 20, -2.0}}};
}

void validate(const PulseSpec &spec) {
  if (spec.length < 1)
    throw SpecError("pulse spec length must be positive");
  std::vector<Pulse> sorted = spec.pulses;
  std::sort(sorted.begin(), sorted.end(),
            [](const Pulse &a, const Pulse &b) { return a.start < b.start; });
  Eigen::Index end = 0;
  for (const Pulse &p : sorted) {
    if (p.start < 0 || p.width < 1 || p.start + p.width > spec.length)
      throw SpecError("pulse at " + std::to_string(p.start) + " (width " +
                      std::to_string(p.width) + ") does not fit in length " +
                      std::to_string(spec.length));
    if (!std::isfinite(p.amplitude))
      throw SpecError("pulse amplitude must be finite");
    if (p.start < end)
      throw SpecError("pulse at " + std::to_string(p.start) +
                      " overlaps the previous pulse");
    end = p.start + p.width;
  }
}

Signal generate_pulses(const PulseSpec &spec) {
  validate(spec);
  Signal x = Signal::Zero(spec.length);
  for (const Pulse &p : spec.pulses)
    x.segment(p.start, p.width).setConstant(p.amplitude);
  return x;
}

Signal gaussian_noise(Eigen::Index n, const NoiseSpec &noise) {
  if (!(noise.sigma >= 0.0) || !std::isfinite(noise.sigma))
    throw ParameterError("noise sigma must be finite and >= 0");
  GaussianStream stream(noise.seed);
  Signal w(n);
  for (Eigen::Index i = 0; i < n; ++i)
    w(i) = noise.sigma * stream.next();
  return w;
}

Signal add_awgn(const Eigen::Ref<const Signal> &x, const NoiseSpec &noise) {
  if (noise.sigma == 0.0)
    return x;
  return x + gaussian_noise(x.size(), noise);
}

double lambda1_heuristic(Eigen::Index n, double sigma, double beta) {
  return beta * std::sqrt(static_cast<double>(n)) * sigma;
}

double rmse(const Eigen::Ref<const Signal> &x,
            const Eigen::Ref<const Signal> &reference) {
  if (x.size() != reference.size() || x.size() == 0)
    throw SizeError("rmse: signals must be non-empty and of equal length");
  return std::sqrt((x - reference).squaredNorm() /
                   static_cast<double>(x.size()));
}

} // namespace cncfl
