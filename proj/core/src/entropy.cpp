#include "mixate/entropy.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mixate/error.hpp"

namespace mixate {

namespace {

// (1+u) log(1+u) - u, accurate for small |u|.
double relative_xlogx(double u) {
  if (std::abs(u) < 1e-2) {
    double term = u * u;
    double sum = 0.0;
    for (int k = 2; k < 12; ++k) {
      sum += term / (k * (k - 1.0));
      term *= -u;
    }
    return sum;
  }
  return u <= -1.0 ? 1.0 : (1.0 + u) * std::log1p(u) - u;
}

}  // namespace

std::string_view PhiFunctional::name() const noexcept {
  return kind_ == PhiKind::kULogU ? "u_log_u" : "u_squared";
}

double PhiFunctional::value(double u) const {
  if (kind_ == PhiKind::kUSquared) return u * u;
  return u > 0.0 ? u * std::log(u) : 0.0;
}

double PhiFunctional::derivative(double u) const {
  if (kind_ == PhiKind::kUSquared) return 2.0 * u;
  return u > 0.0 ? 1.0 + std::log(u)
                 : -std::numeric_limits<double>::infinity();
}

DensityFunction::DensityFunction(std::vector<double> values)
    : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] >= 0.0) || !std::isfinite(values_[i])) {
      throw Error(ErrorCode::kInvalidDensity,
                  "entry " + std::to_string(i) + " is negative or not finite");
    }
  }
}

DensityFunction DensityFunction::constant(std::size_t size, double c) {
  return DensityFunction(std::vector<double>(size, c));
}

DensityFunction DensityFunction::scaled(double alpha) const {
  std::vector<double> out(values_);
  for (double& v : out) v *= alpha;
  return DensityFunction(std::move(out));
}

DensityFunction density_ratio(const DenseDistribution& pi,
                              const DenseDistribution& mu) {
  if (!(pi.space() == mu.space())) {
    throw Error(ErrorCode::kDimensionMismatch, "state spaces differ");
  }
  std::vector<double> f(mu.size(), 0.0);
  for (std::size_t x = 0; x < mu.size(); ++x) {
    if (mu[x] > 0.0) {
      f[x] = pi[x] / mu[x];
    } else if (pi[x] > 0.0) {
      throw Error(ErrorCode::kAbsoluteContinuityViolation,
                  "pi charges index " + std::to_string(x) +
                      " where mu is zero");
    }
  }
  return DensityFunction(std::move(f));
}

double phi_entropy(std::span<const double> weights,
                   std::span<const double> f, PhiFunctional phi) {
  if (weights.size() != f.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "weights and f differ");
  }
  double total = 0.0;
  double mean = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] < 0.0) {
      throw Error(ErrorCode::kInvalidDensity, "negative density entry");
    }
    total += weights[i];
    mean += weights[i] * f[i];
  }
  if (!(total > 0.0)) return 0.0;
  mean /= total;
  if (mean == 0.0) return 0.0;
  // Both forms below are sums of nonnegative terms, so the result never
  // dips below zero from cancellation.
  double sum = 0.0;
  if (phi.kind() == PhiKind::kULogU) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (weights[i] == 0.0) continue;
      // f log(f/mean) - f + mean, written relative to the mean.
      sum += weights[i] * mean * relative_xlogx(f[i] / mean - 1.0);
    }
  } else {
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double d = f[i] - mean;
      sum += weights[i] * d * d;
    }
  }
  return sum / total;
}

double phi_entropy(const DenseDistribution& mu, const DensityFunction& f,
                   PhiFunctional phi) {
  if (f.size() != mu.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "density size mismatch");
  }
  return phi_entropy(mu.probs(), f.values(), phi);
}

double local_phi_functional(const DenseDistribution& mu,
                            const DensityFunction& f, PhiFunctional phi) {
  const StateSpace& space = mu.space();
  if (f.size() != mu.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "density size mismatch");
  }
  const std::size_t q = space.q();
  std::vector<double> w(q), fv(q);
  double sum = 0.0;
  for (std::size_t site = 0; site < space.n(); ++site) {
    const std::size_t stride = space.stride(site);
    for (std::size_t x = 0; x < space.size(); ++x) {
      if (space.symbol_at(x, site) != 0) continue;
      double mass = 0.0;
      bool touched = false;
      for (std::size_t b = 0; b < q; ++b) {
        w[b] = mu[x + b * stride];
        fv[b] = f[x + b * stride];
        mass += w[b];
        touched = touched || fv[b] > 0.0;
      }
      if (!(mass > 0.0)) {
        if (touched) {
          throw Error(ErrorCode::kUnsupportedSlice,
                      "f is positive on a zero-mass slice");
        }
        continue;
      }
      // E_{x~mu} over the slice weighs its entropy by the slice mass.
      sum += mass * phi_entropy(w, fv, phi);
    }
  }
  return sum;
}

FlipSides conditional_flip_sides(const DenseDistribution& pi,
                                 const DenseDistribution& mu) {
  FlipSides sides;
  sides.lhs = local_entropy_functional(mu, density_ratio(pi, mu));

  const StateSpace& space = mu.space();
  const std::size_t q = space.q();
  std::vector<double> pw(q), mw(q);
  double rhs = 0.0;
  for (std::size_t site = 0; site < space.n(); ++site) {
    for (std::size_t x = 0; x < space.size(); ++x) {
      if (space.symbol_at(x, site) != 0) continue;
      const double pmass = slice_weights(pi.probs(), space, x, site, pw);
      const double mmass = slice_weights(mu.probs(), space, x, site, mw);
      if (!(pmass > 0.0)) continue;
      // Ent_{z~mu|slice}[pi|slice(z)/mu|slice(z)], summed out directly.
      double ent = 0.0;
      for (std::size_t b = 0; b < q; ++b) {
        const double pc = pw[b] / pmass;
        const double mc = mw[b] / mmass;
        const double ratio = pc / mc;
        ent += mc * (ratio > 0.0 ? ratio * std::log(ratio) : 0.0);
      }
      rhs += pmass * ent;
    }
  }
  sides.rhs = rhs;
  return sides;
}

}  // namespace mixate
