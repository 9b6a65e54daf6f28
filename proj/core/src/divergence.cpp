#include "mixate/divergence.hpp"

#include <cmath>
#include <limits>

#include "mixate/error.hpp"

namespace mixate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_sizes(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "tables differ in length");
  }
}

void check_spaces(const DenseDistribution& a, const DenseDistribution& b) {
  if (!(a.space() == b.space())) {
    throw Error(ErrorCode::kDimensionMismatch, "state spaces differ");
  }
}

}  // namespace

double kl(std::span<const double> p, std::span<const double> q) {
  check_sizes(p, q);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return kInf;
    sum += p[i] * std::log(p[i] / q[i]);
  }
  // Rounding can leave a tiny negative sum when p ~ q.
  return sum < 0.0 ? 0.0 : sum;
}

double chi_sq(std::span<const double> p, std::span<const double> q) {
  check_sizes(p, q);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (q[i] <= 0.0) {
      if (p[i] > 0.0) return kInf;
      continue;
    }
    const double diff = p[i] - q[i];
    sum += diff * diff / q[i];
  }
  return sum;
}

double hellinger_sq(std::span<const double> p, std::span<const double> q) {
  check_sizes(p, q);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double diff = std::sqrt(p[i]) - std::sqrt(q[i]);
    sum += diff * diff;
  }
  return sum;
}

double kl_divergence(const DenseDistribution& pi,
                     const DenseDistribution& mu) {
  check_spaces(pi, mu);
  return kl(pi.probs(), mu.probs());
}

double chi_sq_divergence(const DenseDistribution& pi,
                         const DenseDistribution& mu) {
  check_spaces(pi, mu);
  return chi_sq(pi.probs(), mu.probs());
}

double hellinger_sq(const DenseDistribution& pi,
                    const DenseDistribution& mu) {
  check_spaces(pi, mu);
  return hellinger_sq(pi.probs(), mu.probs());
}

}  // namespace mixate
