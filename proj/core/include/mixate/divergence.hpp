#pragma once

#include <span>

#include "mixate/distribution.hpp"

namespace mixate {

// All divergences are in nats. kl and chi_sq return +inf when p is not
// absolutely continuous with respect to q.
double kl(std::span<const double> p, std::span<const double> q);
double chi_sq(std::span<const double> p, std::span<const double> q);
// sum (sqrt p - sqrt q)^2, in [0, 2].
double hellinger_sq(std::span<const double> p, std::span<const double> q);

double kl_divergence(const DenseDistribution& pi, const DenseDistribution& mu);
double chi_sq_divergence(const DenseDistribution& pi,
                         const DenseDistribution& mu);
double hellinger_sq(const DenseDistribution& pi, const DenseDistribution& mu);

}  // namespace mixate
