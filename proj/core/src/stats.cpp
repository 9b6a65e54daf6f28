#include "mixate/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/gamma.hpp>

#include "mixate/error.hpp"

namespace mixate {

Interval wilson_interval(std::size_t successes, std::size_t trials,
                         double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double binomial_se(double p, std::size_t trials) {
  if (trials == 0) return 0.0;
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

MeanEstimate mean_estimate(std::span<const double> values) {
  MeanEstimate est;
  if (values.empty()) return est;
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  est.mean = sum / n;
  if (values.size() < 2) return est;
  double ss = 0.0;
  for (double v : values) ss += (v - est.mean) * (v - est.mean);
  est.se = std::sqrt(ss / (n - 1.0) / n);
  return est;
}

double chi_square_sf(double stat, double df) {
  if (!(df > 0.0)) {
    throw Error(ErrorCode::kInvalidParameter, "df must be positive");
  }
  if (stat <= 0.0) return 1.0;
  return boost::math::gamma_q(df / 2.0, stat / 2.0);
}

ChiSquareResult two_sample_chi_square(std::span<const std::uint64_t> a,
                                      std::span<const std::uint64_t> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "count vectors differ");
  }
  double na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    na += static_cast<double>(a[i]);
    nb += static_cast<double>(b[i]);
  }
  if (!(na > 0.0) || !(nb > 0.0)) {
    throw Error(ErrorCode::kInvalidParameter, "empty sample");
  }
  const double ka = std::sqrt(nb / na);
  const double kb = std::sqrt(na / nb);
  ChiSquareResult r;
  std::size_t bins = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ai = static_cast<double>(a[i]);
    const double bi = static_cast<double>(b[i]);
    if (ai + bi == 0.0) continue;
    ++bins;
    const double d = ka * ai - kb * bi;
    r.statistic += d * d / (ai + bi);
  }
  r.df = bins > 1 ? static_cast<double>(bins - 1) : 1.0;
  r.p_value = chi_square_sf(r.statistic, r.df);
  return r;
}

ChiSquareResult chi_square_gof(std::span<const std::uint64_t> counts,
                               std::span<const double> p) {
  if (counts.size() != p.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "count/probability sizes");
  }
  double n = 0.0;
  for (auto c : counts) n += static_cast<double>(c);
  ChiSquareResult r;
  std::size_t bins = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double c = static_cast<double>(counts[i]);
    if (p[i] <= 0.0) {
      if (c > 0.0) r.statistic = std::numeric_limits<double>::infinity();
      continue;
    }
    ++bins;
    const double e = n * p[i];
    r.statistic += (c - e) * (c - e) / e;
  }
  r.df = bins > 1 ? static_cast<double>(bins - 1) : 1.0;
  r.p_value = std::isfinite(r.statistic) ? chi_square_sf(r.statistic, r.df)
                                         : 0.0;
  return r;
}

}  // namespace mixate
