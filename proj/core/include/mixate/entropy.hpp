#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "mixate/distribution.hpp"

namespace mixate {

enum class PhiKind { kULogU, kUSquared };

// Convex Phi with Phi(1) = 0 (u log u) or Phi(1) = 1 (u^2; the constant
// cancels in every entropy so it is left as is).
class PhiFunctional {
 public:
  constexpr explicit PhiFunctional(PhiKind kind) : kind_(kind) {}

  static constexpr PhiFunctional u_log_u() {
    return PhiFunctional(PhiKind::kULogU);
  }
  static constexpr PhiFunctional u_squared() {
    return PhiFunctional(PhiKind::kUSquared);
  }

  PhiKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept;

  // 0 log 0 = 0.
  double value(double u) const;
  // Phi'(u); for u log u this is 1 + log u, -inf at 0.
  double derivative(double u) const;

  friend bool operator==(PhiFunctional, PhiFunctional) = default;

 private:
  PhiKind kind_;
};

// Nonnegative function on Sigma^n, indexed like DenseDistribution.
class DensityFunction {
 public:
  DensityFunction() = default;
  // Throws InvalidDensity on a negative or non-finite entry.
  explicit DensityFunction(std::vector<double> values);

  static DensityFunction constant(std::size_t size, double c);

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  DensityFunction scaled(double alpha) const;

 private:
  std::vector<double> values_;
};

// f = pi/mu. Points with pi = mu = 0 get f = 0; pi > 0 = mu throws
// AbsoluteContinuityViolation.
DensityFunction density_ratio(const DenseDistribution& pi,
                              const DenseDistribution& mu);

// Ent^Phi of f under the (not necessarily normalized) weights w,
// normalized by their total. Used for slices and for laws on [k].
double phi_entropy(std::span<const double> weights,
                   std::span<const double> f, PhiFunctional phi);

// E_mu[Phi(f)] - Phi(E_mu f).
double phi_entropy(const DenseDistribution& mu, const DensityFunction& f,
                   PhiFunctional phi = PhiFunctional::u_log_u());

// sum_i E_{x~mu}[Ent^Phi_{mu|x_{-i}}[f]]. With u log u this is L_mu[f].
// Slices of zero mass contribute nothing unless f is positive on them,
// which throws UnsupportedSlice.
double local_phi_functional(const DenseDistribution& mu,
                            const DensityFunction& f, PhiFunctional phi);

inline double local_entropy_functional(const DenseDistribution& mu,
                                       const DensityFunction& f) {
  return local_phi_functional(mu, f, PhiFunctional::u_log_u());
}

// The two sides of
//   L_mu[pi/mu] = sum_i E_{x~pi}[KL(pi|x_{-i} || mu|x_{-i})],
// each summed on its own.
struct FlipSides {
  double lhs = 0.0;
  double rhs = 0.0;
};

FlipSides conditional_flip_sides(const DenseDistribution& pi,
                                 const DenseDistribution& mu);

}  // namespace mixate
