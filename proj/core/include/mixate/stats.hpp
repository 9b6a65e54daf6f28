#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mixate {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

// Wilson score interval for a binomial proportion.
Interval wilson_interval(std::size_t successes, std::size_t trials,
                         double z = 3.0);

// sqrt(p(1-p)/trials)
double binomial_se(double p, std::size_t trials);

struct MeanEstimate {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean
};

MeanEstimate mean_estimate(std::span<const double> values);

// Upper tail of the chi-square law with df degrees of freedom.
double chi_square_sf(double stat, double df);

struct ChiSquareResult {
  double statistic = 0.0;
  double df = 0.0;
  double p_value = 1.0;
};

// Two-sample (homogeneity) chi-square on count vectors with possibly
// different totals. Bins empty in both samples are dropped.
ChiSquareResult two_sample_chi_square(std::span<const std::uint64_t> a,
                                      std::span<const std::uint64_t> b);

// One-sample goodness of fit against probabilities p.
ChiSquareResult chi_square_gof(std::span<const std::uint64_t> counts,
                               std::span<const double> p);

}  // namespace mixate
