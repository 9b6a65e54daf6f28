#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mixate/random.hpp"

namespace mixate {

// Calibrated constants of the H^2 tester (see README for the calibration
// family). m = ceil(kH2SampleConstant * sqrt(d) / eps) samples per
// repetition, a repetition rejects when Z > kH2Threshold * m^2 * eps, and
// r = ceil(kRepetitionConstant * ln(1/delta)) repetitions are combined by
// majority.
inline constexpr double kH2SampleConstant = 16.0;
inline constexpr double kH2Threshold = 1.5;
inline constexpr double kRepetitionConstant = 2.0;

// The constant in the KL-Test sample bound; the same number the product-set
// identity test uses to size its coordinate budget.
constexpr double c_kl_test() { return kH2SampleConstant; }

enum class Verdict { kAccept, kReject };

std::string_view to_string(Verdict v);

// Draws one outcome in [0, d).
using SampleSource = std::function<std::size_t()>;

struct TestVerdict {
  Verdict verdict = Verdict::kAccept;
  std::uint64_t samples_used = 0;
  std::size_t repetitions = 0;
  std::size_t rejecting_repetitions = 0;
  double threshold = 0.0;
  std::vector<double> statistics;  // Z per repetition

  nlohmann::json to_json() const;
};

std::size_t repetitions(double delta);
std::uint64_t h2_samples_per_repetition(std::size_t d, double eps);
// r * ceil(c_kl_test() * sqrt(d) * ln(e^2/eta) / eps).
std::uint64_t kl_test_sample_count(std::size_t d, double eta, double eps,
                                   double delta);

// Accepts w.p. >= 1 - delta when chi^2(p||q) <= eps/2, rejects w.p.
// >= 1 - delta when H^2(p||q) >= eps. Throws InvalidSpec on a bad spec.
TestVerdict h2_test(const SampleSource& source, std::span<const double> q,
                    double eps, double delta);

// Accepts w.p. >= 1 - delta when p = q, rejects w.p. >= 1 - delta when
// KL(p||q) >= eps. Runs h2_test at eps / ln(e^2/eta_q).
TestVerdict kl_test(const SampleSource& source, std::span<const double> q,
                    double eps, double delta);

// Z = sum_i ((N_i - m q_i)^2 - N_i) / q_i.
double h2_statistic(std::span<const std::uint64_t> counts,
                    std::span<const double> q, std::uint64_t m);

}  // namespace mixate
