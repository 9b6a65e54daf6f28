#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mixate/distribution.hpp"
#include "mixate/entropy.hpp"

namespace mixate {

// mu = sum_a rho(a) mu_a. The mixture table is computed once at
// construction.
class MixtureModel {
 public:
  // Weights must be strictly positive and sum to 1 within
  // kSimplexTolerance; components must share one state space.
  MixtureModel(std::vector<double> weights,
               std::vector<DenseDistribution> components);

  std::size_t k() const noexcept { return weights_.size(); }
  std::span<const double> weights() const noexcept { return weights_; }
  const std::vector<DenseDistribution>& components() const noexcept {
    return components_;
  }
  const DenseDistribution& component(std::size_t a) const {
    return components_[a];
  }
  const DenseDistribution& mixture() const noexcept { return mixture_; }
  const StateSpace& space() const noexcept { return mixture_.space(); }
  double min_weight() const noexcept { return min_weight_; }

 private:
  std::vector<double> weights_;
  std::vector<DenseDistribution> components_;
  DenseDistribution mixture_;
  double min_weight_;
};

// rho(a) mu_a(x) / mu(x) written into out (size k). Throws
// UnsupportedPoint when mu(x) = 0.
void posterior_at(const MixtureModel& model, std::size_t index,
                  std::span<double> out);
std::vector<double> posterior(const MixtureModel& model, const Config& x);

// rho_pi(a) = sum_x pi(x) posterior(x)(a).
std::vector<double> rho_of(const MixtureModel& model,
                           const DenseDistribution& pi);

struct ChainRuleParts {
  double inter = 0.0;  // Ent^Phi_{a~rho}[E_{mu_a} f]
  double intra = 0.0;  // E_{a~rho}[Ent^Phi_{mu_a} f]
  double total = 0.0;  // Ent^Phi_mu[f]
};

ChainRuleParts chain_rule_decompose(const MixtureModel& model,
                                    const DensityFunction& f,
                                    PhiFunctional phi);

// Mixture with the same components and new weights.
MixtureModel reweighted(const MixtureModel& model,
                        std::vector<double> weights);

}  // namespace mixate
