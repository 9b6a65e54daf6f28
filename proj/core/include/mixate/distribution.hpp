#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mixate/random.hpp"
#include "mixate/space.hpp"

namespace mixate {

inline constexpr double kSimplexTolerance = 1e-12;

// Explicit probability table over Sigma^n in big-endian index order.
// Immutable once built.
class DenseDistribution {
 public:
  // probs must be nonnegative and sum to 1 within kSimplexTolerance.
  DenseDistribution(StateSpace space, std::vector<double> probs);

  // Normalizes nonnegative weights with positive total.
  static DenseDistribution from_weights(StateSpace space,
                                        std::vector<double> weights);
  static DenseDistribution uniform(StateSpace space);
  static DenseDistribution point_mass(StateSpace space, const Config& x);
  // Independent coordinates; marginals[i] is a law on Sigma for site i.
  static DenseDistribution product(
      StateSpace space, const std::vector<std::vector<double>>& marginals);
  // Bern(p)^n on {0,1}^n.
  static DenseDistribution bernoulli_product(std::size_t n, double p);

  const StateSpace& space() const noexcept { return space_; }
  std::size_t size() const noexcept { return probs_.size(); }
  std::span<const double> probs() const noexcept { return probs_; }
  double operator[](std::size_t index) const { return probs_[index]; }
  double prob(const Config& x) const { return probs_[space_.encode(x)]; }

  double min_prob() const;
  bool fully_supported() const { return min_prob() > 0.0; }
  bool is_point_mass() const;

  std::size_t sample_index(Rng& rng) const { return sampler_(rng); }
  Config sample(Rng& rng) const { return space_.decode(sampler_(rng)); }

 private:
  StateSpace space_;
  std::vector<double> probs_;
  CdfSampler sampler_;
};

// Law of coordinate `site` under mu conditioned on every other coordinate
// agreeing with the base config.
struct ConditionalSlice {
  Config base;
  std::size_t site = 0;
  std::vector<double> law;
};

// Writes mu(x <-site b) for each b into out (size q) and returns the slice
// mass. No normalization, no errors.
double slice_weights(std::span<const double> probs, const StateSpace& space,
                     std::size_t index, std::size_t site,
                     std::span<double> out);

ConditionalSlice conditional_slice(const DenseDistribution& mu,
                                   const Config& x, std::size_t site);
// Normalized slice law into out; throws UnsupportedSlice on zero mass.
void conditional_law(const DenseDistribution& mu, std::size_t index,
                     std::size_t site, std::span<double> out);

struct BalanceResult {
  double eta = 0.0;
  // False when some slice carries zero mass (eta is then reported as 0).
  bool fully_supported = true;
};

BalanceResult balance(const DenseDistribution& mu);

// min_x mu(x) >= balance(mu)^n - 1e-12.
bool min_prob_lower_bound_check(const DenseDistribution& mu);

double total_variation(const DenseDistribution& a, const DenseDistribution& b);

}  // namespace mixate
