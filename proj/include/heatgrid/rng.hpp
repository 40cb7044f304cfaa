#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace heatgrid {

// Counter-based deterministic generator. Draw i of the stream keyed by
// (seed, trial, unit, field) is a pure function of those five integers, so
// trial k's values do not depend on how many trials run or on thread
// scheduling. Recorded in run manifests as the algorithm below.
inline constexpr char kRngAlgorithm[] = "splitmix64-counter-v1";

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class RngStream {
 public:
  static RngStream derive(std::uint64_t seed, std::uint64_t trial, std::uint64_t unit,
                          std::uint64_t field) {
    std::uint64_t k = splitmix64(seed);
    k = splitmix64(k ^ splitmix64(trial + 0x7f4a7c15ULL));
    k = splitmix64(k ^ splitmix64(unit * 8 + field + 1));
    return RngStream(k);
  }

  explicit RngStream(std::uint64_t key) : key_(key) {}

  // uniform in [0, 1)
  double next_uniform01() {
    const std::uint64_t u = splitmix64(key_ + 0x9e3779b97f4a7c15ULL * ++ctr_);
    return static_cast<double>(u >> 11) * 0x1.0p-53;
  }

  double next_uniform(double lo, double hi) { return lo + next_uniform01() * (hi - lo); }

  // standard normal via Box-Muller; consumes two counters
  double next_normal() {
    const double u1 = (static_cast<double>(
                           splitmix64(key_ + 0x9e3779b97f4a7c15ULL * ++ctr_) >> 11) +
                       1.0) *
                      0x1.0p-53;  // (0, 1]
    const double u2 = next_uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  double next_normal(double mean, double sigma) { return mean + sigma * next_normal(); }

  // Gaussian truncated to > 0 by resampling. At sigma = 20% of the mean the
  // rejection probability is ~3e-7, so the loop effectively never iterates.
  double next_positive_normal(double mean, double sigma) {
    for (;;) {
      const double v = next_normal(mean, sigma);
      if (v > 0.0) return v;
    }
  }

 private:
  std::uint64_t key_;
  std::uint64_t ctr_ = 0;
};

}  // namespace heatgrid
