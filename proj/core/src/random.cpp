#include "mixate/random.hpp"

#include <algorithm>

#include "mixate/error.hpp"

namespace mixate {

std::size_t uniform_index(Rng& rng, std::size_t bound) {
  const std::uint64_t b = bound;
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % b);
  std::uint64_t v = rng();
  while (v >= limit) v = rng();
  return static_cast<std::size_t>(v % b);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::size_t sample_weighted(std::span<const double> weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) {
    throw Error(ErrorCode::kInvalidDistribution,
                "cannot sample from a table with zero total mass");
  }
  const double u = uniform01(rng) * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = i;
    if (u < acc) return i;
  }
  return last_positive;
}

CdfSampler::CdfSampler(std::span<const double> weights)
    : cdf_(weights.size()) {
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    cdf_[i] = acc;
  }
  if (!(acc > 0.0)) {
    throw Error(ErrorCode::kInvalidDistribution,
                "cannot sample from a table with zero total mass");
  }
}

std::size_t CdfSampler::operator()(Rng& rng) const {
  const double u = uniform01(rng) * cdf_.back();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  // Only reachable through rounding at the top end; never land on an
  // empty cell.
  while (it != cdf_.begin() && *(it - 1) == *it) --it;
  return static_cast<std::size_t>(it - cdf_.begin());
}

}  // namespace mixate
