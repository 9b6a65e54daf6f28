#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mixate/distribution.hpp"
#include "mixate/entropy.hpp"

namespace mixate {

class MixtureModel;

struct EstimatorOptions {
  std::size_t restarts = 20;  // random tilts, on top of n coordinate tilts
  std::size_t iters = 500;
  double tol = 1e-9;
  std::uint64_t seed = 1;
  // Extra starting points (positive functions), tried before the tilts.
  std::vector<DensityFunction> warm_starts;
};

enum class EstimateFlag { kNone, kPointMass, kUnbounded };

struct FunctionalConstantEstimate {
  double lower = 1.0;  // best ratio found; a lower bound on the constant
  DensityFunction witness;
  std::size_t iterations = 0;
  bool converged = false;
  EstimateFlag flag = EstimateFlag::kNone;
};

// max_f Ent_mu[f] / L_mu[f].
FunctionalConstantEstimate estimate_ate_constant(
    const DenseDistribution& mu, const EstimatorOptions& options = {});

// max_f Ent^Phi_mu[f] / E_P(f, Phi'(f)) with P the Glauber chain of mu.
FunctionalConstantEstimate estimate_phi_sobolev_constant(
    const DenseDistribution& mu, PhiFunctional phi,
    const EstimatorOptions& options = {});

inline FunctionalConstantEstimate estimate_mlsi_constant(
    const DenseDistribution& mu, const EstimatorOptions& options = {}) {
  return estimate_phi_sobolev_constant(mu, PhiFunctional::u_log_u(), options);
}

// Ratios at a fixed f, for cross-checks.
double ate_ratio(const DenseDistribution& mu, const DensityFunction& f);
double phi_sobolev_ratio(const DenseDistribution& mu, const DensityFunction& f,
                         PhiFunctional phi);

struct WeakSobolevCheck {
  double lhs = 0.0;    // Ent^Phi_mu[f]
  double rhs = 0.0;    // cstar E_P(f, Phi'(f)) + Ent^Phi_{a~rho}[E_{mu_a} f]
  double inter = 0.0;  // the error term alone
  bool holds = false;  // lhs <= rhs + 1e-9
};

WeakSobolevCheck weak_phi_sobolev_check(const MixtureModel& model,
                                        const DensityFunction& f,
                                        double cstar, PhiFunctional phi);

}  // namespace mixate
