#include "mixate/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mixate/error.hpp"

namespace mixate {

namespace {

std::vector<double> validated_weights(std::vector<double> weights,
                                      std::size_t count) {
  if (weights.empty()) {
    throw Error(ErrorCode::kInvalidDistribution, "mixture needs k >= 1");
  }
  if (weights.size() != count) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(weights.size()) + " weights for " +
                    std::to_string(count) + " components");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::kInvalidDistribution,
                  "mixture weights must be strictly positive");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > kSimplexTolerance) {
    throw Error(ErrorCode::kInvalidDistribution,
                "mixture weights sum to " + std::to_string(total));
  }
  return weights;
}

DenseDistribution mix(std::span<const double> weights,
                      const std::vector<DenseDistribution>& components) {
  const StateSpace& space = components.front().space();
  std::vector<double> probs(space.size(), 0.0);
  for (std::size_t a = 0; a < components.size(); ++a) {
    if (!(components[a].space() == space)) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "component " + std::to_string(a) +
                      " lives on a different state space");
    }
    for (std::size_t x = 0; x < probs.size(); ++x) {
      probs[x] += weights[a] * components[a][x];
    }
  }
  return DenseDistribution::from_weights(space, std::move(probs));
}

}  // namespace

MixtureModel::MixtureModel(std::vector<double> weights,
                           std::vector<DenseDistribution> components)
    : weights_(validated_weights(std::move(weights), components.size())),
      components_(std::move(components)),
      mixture_(mix(weights_, components_)),
      min_weight_(*std::min_element(weights_.begin(), weights_.end())) {}

void posterior_at(const MixtureModel& model, std::size_t index,
                  std::span<double> out) {
  double total = 0.0;
  for (std::size_t a = 0; a < model.k(); ++a) {
    out[a] = model.weights()[a] * model.component(a)[index];
    total += out[a];
  }
  if (!(total > 0.0)) {
    throw Error(ErrorCode::kUnsupportedPoint,
                "mu is zero at index " + std::to_string(index));
  }
  for (std::size_t a = 0; a < model.k(); ++a) out[a] /= total;
}

std::vector<double> posterior(const MixtureModel& model, const Config& x) {
  std::vector<double> out(model.k());
  posterior_at(model, model.space().encode(x), out);
  return out;
}

std::vector<double> rho_of(const MixtureModel& model,
                           const DenseDistribution& pi) {
  if (!(pi.space() == model.space())) {
    throw Error(ErrorCode::kDimensionMismatch, "state spaces differ");
  }
  std::vector<double> rho(model.k(), 0.0);
  std::vector<double> post(model.k());
  for (std::size_t x = 0; x < pi.size(); ++x) {
    if (pi[x] <= 0.0) continue;
    if (!(model.mixture()[x] > 0.0)) {
      throw Error(ErrorCode::kAbsoluteContinuityViolation,
                  "pi charges index " + std::to_string(x) +
                      " where mu is zero");
    }
    posterior_at(model, x, post);
    for (std::size_t a = 0; a < model.k(); ++a) rho[a] += pi[x] * post[a];
  }
  return rho;
}

ChainRuleParts chain_rule_decompose(const MixtureModel& model,
                                    const DensityFunction& f,
                                    PhiFunctional phi) {
  ChainRuleParts parts;
  std::vector<double> means(model.k());
  for (std::size_t a = 0; a < model.k(); ++a) {
    const DenseDistribution& mu_a = model.component(a);
    double mean = 0.0;
    for (std::size_t x = 0; x < mu_a.size(); ++x) mean += mu_a[x] * f[x];
    means[a] = mean;
    parts.intra += model.weights()[a] * phi_entropy(mu_a, f, phi);
  }
  parts.inter = phi_entropy(model.weights(), means, phi);
  parts.total = phi_entropy(model.mixture(), f, phi);
  return parts;
}

MixtureModel reweighted(const MixtureModel& model,
                        std::vector<double> weights) {
  return MixtureModel(std::move(weights), model.components());
}

}  // namespace mixate
