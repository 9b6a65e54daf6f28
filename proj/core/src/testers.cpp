#include "mixate/testers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mixate/error.hpp"

namespace mixate {

namespace {

void validate_spec(std::span<const double> q, double eps, double delta) {
  if (q.size() < 2) {
    throw Error(ErrorCode::kInvalidSpec, "domain size must be >= 2");
  }
  double total = 0.0;
  for (double v : q) {
    if (!(v > 0.0)) {
      throw Error(ErrorCode::kInvalidSpec,
                  "reference law must be fully supported");
    }
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidSpec, "reference law must sum to 1");
  }
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw Error(ErrorCode::kInvalidSpec, "eps must be positive");
  }
  if (!(delta > 0.0 && delta < 0.5)) {
    throw Error(ErrorCode::kInvalidSpec, "delta must lie in (0, 1/2)");
  }
}

double min_of(std::span<const double> q) {
  return *std::min_element(q.begin(), q.end());
}

TestVerdict run_h2(const SampleSource& source, std::span<const double> q,
                   double eps, std::uint64_t m, std::size_t reps) {
  TestVerdict out;
  out.repetitions = reps;
  out.threshold = kH2Threshold * static_cast<double>(m) *
                  static_cast<double>(m) * eps;
  std::vector<std::uint64_t> counts(q.size());
  for (std::size_t r = 0; r < reps; ++r) {
    std::fill(counts.begin(), counts.end(), 0);
    for (std::uint64_t s = 0; s < m; ++s) {
      const std::size_t v = source();
      if (v >= q.size()) {
        throw Error(ErrorCode::kInvalidParameter,
                    "sample " + std::to_string(v) + " outside the domain");
      }
      ++counts[v];
    }
    out.samples_used += m;
    const double z = h2_statistic(counts, q, m);
    out.statistics.push_back(z);
    if (z > out.threshold) ++out.rejecting_repetitions;
  }
  // Ties go to reject.
  out.verdict = 2 * out.rejecting_repetitions >= reps ? Verdict::kReject
                                                      : Verdict::kAccept;
  return out;
}

}  // namespace

std::string_view to_string(Verdict v) {
  return v == Verdict::kAccept ? "accept" : "reject";
}

nlohmann::json TestVerdict::to_json() const {
  return {{"verdict", std::string(to_string(verdict))},
          {"samples_used", samples_used}};
}

std::size_t repetitions(double delta) {
  if (!(delta > 0.0 && delta < 0.5)) {
    throw Error(ErrorCode::kInvalidSpec, "delta must lie in (0, 1/2)");
  }
  return static_cast<std::size_t>(
      std::ceil(kRepetitionConstant * std::log(1.0 / delta)));
}

std::uint64_t h2_samples_per_repetition(std::size_t d, double eps) {
  return static_cast<std::uint64_t>(
      std::ceil(kH2SampleConstant * std::sqrt(static_cast<double>(d)) / eps));
}

namespace {

std::uint64_t kl_samples_per_repetition(std::size_t d, double eta,
                                        double eps) {
  const double scale = 2.0 - std::log(eta);  // ln(e^2 / eta)
  return static_cast<std::uint64_t>(std::ceil(
      c_kl_test() * std::sqrt(static_cast<double>(d)) * scale / eps));
}

}  // namespace

std::uint64_t kl_test_sample_count(std::size_t d, double eta, double eps,
                                   double delta) {
  return repetitions(delta) * kl_samples_per_repetition(d, eta, eps);
}

double h2_statistic(std::span<const std::uint64_t> counts,
                    std::span<const double> q, std::uint64_t m) {
  const double md = static_cast<double>(m);
  double z = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double n = static_cast<double>(counts[i]);
    const double dev = n - md * q[i];
    z += (dev * dev - n) / q[i];
  }
  return z;
}

TestVerdict h2_test(const SampleSource& source, std::span<const double> q,
                    double eps, double delta) {
  validate_spec(q, eps, delta);
  return run_h2(source, q, eps, h2_samples_per_repetition(q.size(), eps),
                repetitions(delta));
}

TestVerdict kl_test(const SampleSource& source, std::span<const double> q,
                    double eps, double delta) {
  validate_spec(q, eps, delta);
  const double eta = min_of(q);
  const double scale = 2.0 - std::log(eta);
  return run_h2(source, q, eps / scale,
                kl_samples_per_repetition(q.size(), eta, eps),
                repetitions(delta));
}

}  // namespace mixate
