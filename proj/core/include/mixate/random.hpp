#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace mixate {

using Rng = std::mt19937_64;

// 53-bit uniform in [0, 1). Implemented by hand so streams are identical
// across standard libraries.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

// Uniform integer in [0, bound) by rejection; bound must be positive.
std::size_t uniform_index(Rng& rng, std::size_t bound);

// splitmix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

// Seed for stream `stream` derived from a global seed. Used for per-trial
// seeding so trial i sees the same stream regardless of scheduling.
inline std::uint64_t derive_seed(std::uint64_t global, std::uint64_t stream) {
  return splitmix64(global ^ splitmix64(stream + 0x9e3779b97f4a7c15ULL));
}

// Draws an index with probability proportional to weights (need not be
// normalized). Linear scan, for short tables.
std::size_t sample_weighted(std::span<const double> weights, Rng& rng);

// Inverse-CDF sampler for a fixed table; O(log N) per draw.
class CdfSampler {
 public:
  CdfSampler() = default;
  explicit CdfSampler(std::span<const double> weights);

  std::size_t operator()(Rng& rng) const;
  std::size_t size() const noexcept { return cdf_.size(); }

 private:
  std::vector<double> cdf_;
};

}  // namespace mixate
