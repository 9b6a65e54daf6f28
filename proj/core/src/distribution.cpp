#include "mixate/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mixate/error.hpp"

namespace mixate {

namespace {

void validate_table(const StateSpace& space, std::span<const double> probs) {
  if (probs.size() != space.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "table has " + std::to_string(probs.size()) +
                    " entries, state space has " +
                    std::to_string(space.size()));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!(probs[i] >= 0.0) || !std::isfinite(probs[i])) {
      throw Error(ErrorCode::kInvalidDistribution,
                  "entry " + std::to_string(i) + " is negative or not finite");
    }
    total += probs[i];
  }
  if (std::abs(total - 1.0) > kSimplexTolerance) {
    throw Error(ErrorCode::kInvalidDistribution,
                "entries sum to " + std::to_string(total) + ", not 1");
  }
}

}  // namespace

DenseDistribution::DenseDistribution(StateSpace space,
                                     std::vector<double> probs)
    : space_(std::move(space)), probs_(std::move(probs)) {
  validate_table(space_, probs_);
  sampler_ = CdfSampler(probs_);
}

DenseDistribution DenseDistribution::from_weights(StateSpace space,
                                                  std::vector<double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::kInvalidDistribution,
                  "weights must be finite and nonnegative");
    }
    total += w;
  }
  if (!(total > 0.0)) {
    throw Error(ErrorCode::kInvalidDistribution, "weights sum to zero");
  }
  for (double& w : weights) w /= total;
  return DenseDistribution(std::move(space), std::move(weights));
}

DenseDistribution DenseDistribution::uniform(StateSpace space) {
  const std::size_t size = space.size();
  return DenseDistribution(std::move(space),
                           std::vector<double>(size, 1.0 / size));
}

DenseDistribution DenseDistribution::point_mass(StateSpace space,
                                                const Config& x) {
  std::vector<double> probs(space.size(), 0.0);
  probs[space.encode(x)] = 1.0;
  return DenseDistribution(std::move(space), std::move(probs));
}

DenseDistribution DenseDistribution::product(
    StateSpace space, const std::vector<std::vector<double>>& marginals) {
  if (marginals.size() != space.n()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "need one marginal per coordinate");
  }
  for (const auto& m : marginals) {
    if (m.size() != space.q()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "marginal length must equal the alphabet size");
    }
  }
  std::vector<double> probs(space.size());
  for (std::size_t x = 0; x < space.size(); ++x) {
    double p = 1.0;
    for (std::size_t i = 0; i < space.n(); ++i) {
      p *= marginals[i][space.symbol_at(x, i)];
    }
    probs[x] = p;
  }
  return from_weights(std::move(space), std::move(probs));
}

DenseDistribution DenseDistribution::bernoulli_product(std::size_t n,
                                                       double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::kInvalidParameter, "Bernoulli parameter in [0,1]");
  }
  StateSpace space(Alphabet(2), n);
  return product(space, std::vector<std::vector<double>>(n, {1.0 - p, p}));
}

double DenseDistribution::min_prob() const {
  return *std::min_element(probs_.begin(), probs_.end());
}

bool DenseDistribution::is_point_mass() const {
  return std::count_if(probs_.begin(), probs_.end(),
                       [](double p) { return p > 0.0; }) == 1;
}

double slice_weights(std::span<const double> probs, const StateSpace& space,
                     std::size_t index, std::size_t site,
                     std::span<double> out) {
  const std::size_t base = space.slice_base(index, site);
  const std::size_t stride = space.stride(site);
  double mass = 0.0;
  for (std::size_t b = 0; b < space.q(); ++b) {
    out[b] = probs[base + b * stride];
    mass += out[b];
  }
  return mass;
}

void conditional_law(const DenseDistribution& mu, std::size_t index,
                     std::size_t site, std::span<double> out) {
  const double mass =
      slice_weights(mu.probs(), mu.space(), index, site, out);
  if (!(mass > 0.0)) {
    throw Error(ErrorCode::kUnsupportedSlice,
                "slice through index " + std::to_string(index) +
                    " at site " + std::to_string(site) + " has zero mass");
  }
  for (double& v : out) v /= mass;
}

ConditionalSlice conditional_slice(const DenseDistribution& mu,
                                   const Config& x, std::size_t site) {
  const StateSpace& space = mu.space();
  const std::size_t index = space.encode(x);
  if (site >= space.n()) {
    throw Error(ErrorCode::kInvalidConfig, "site out of range");
  }
  ConditionalSlice slice{x, site, std::vector<double>(space.q())};
  conditional_law(mu, index, site, slice.law);
  return slice;
}

BalanceResult balance(const DenseDistribution& mu) {
  const StateSpace& space = mu.space();
  std::vector<double> w(space.q());
  BalanceResult result{1.0, true};
  for (std::size_t site = 0; site < space.n(); ++site) {
    for (std::size_t x = 0; x < space.size(); ++x) {
      if (space.symbol_at(x, site) != 0) continue;  // one visit per slice
      const double mass = slice_weights(mu.probs(), space, x, site, w);
      if (!(mass > 0.0)) {
        result.fully_supported = false;
        result.eta = 0.0;
        continue;
      }
      for (double v : w) result.eta = std::min(result.eta, v / mass);
    }
  }
  return result;
}

bool min_prob_lower_bound_check(const DenseDistribution& mu) {
  const BalanceResult b = balance(mu);
  return mu.min_prob() >=
         std::pow(b.eta, static_cast<double>(mu.space().n())) - 1e-12;
}

double total_variation(const DenseDistribution& a,
                       const DenseDistribution& b) {
  if (!(a.space() == b.space())) {
    throw Error(ErrorCode::kDimensionMismatch, "state spaces differ");
  }
  double tv = 0.0;
  for (std::size_t x = 0; x < a.size(); ++x) tv += std::abs(a[x] - b[x]);
  return 0.5 * tv;
}

}  // namespace mixate
