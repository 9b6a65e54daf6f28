#include "mixate/testers.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "mixate/divergence.hpp"
#include "mixate/error.hpp"
#include "mixate/random.hpp"
#include "mixate/stats.hpp"
#include "reference.hpp"

namespace mixate {
namespace {

SampleSource source_for(const std::vector<double>& p, Rng& rng) {
  auto sampler = std::make_shared<CdfSampler>(p);
  return [sampler, &rng] { return (*sampler)(rng); };
}

// Fraction of `trials` runs of test(p) that reject.
template <typename Test>
double reject_rate(const std::vector<double>& p, int trials, Test&& test,
                   std::uint64_t seed) {
  int rejects = 0;
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, t));
    rejects += test(source_for(p, rng)).verdict == Verdict::kReject;
  }
  return rejects / static_cast<double>(trials);
}

// (1 - t) q + t e_d with e_d a point mass on the last symbol, with t chosen by
// bisection so that H^2 hits the target.
std::vector<double> shifted(const std::vector<double>& q, double target) {
  auto mix = [&](double t) {
    std::vector<double> p(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) p[i] = (1 - t) * q[i];
    p.back() += t;
    return p;
  };
  double a = 0.0, b = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    (hellinger_sq(mix(mid), q) < target ? a : b) = mid;
  }
  return mix(b);
}

TEST(H2TestTest, AcceptsIdentical) {
  const std::vector<double> q(10, 0.1);
  const double rate = reject_rate(q, 200, [&](const SampleSource& s) {
    return h2_test(s, q, 0.2, 0.1);
  }, 1);
  EXPECT_LE(rate, 0.1);
}

TEST(H2TestTest, RejectsFarInHellinger) {
  const std::vector<double> q(10, 0.1);
  const auto p = shifted(q, 0.3);
  ASSERT_GE(hellinger_sq(p, q), 0.3 - 1e-9);
  const double rate = reject_rate(p, 200, [&](const SampleSource& s) {
    return h2_test(s, q, 0.2, 0.1);
  }, 2);
  EXPECT_GE(rate, 0.9);
}

TEST(H2TestTest, PointHeavyBinary) {
  const std::vector<double> q{0.99, 0.01};
  const double rate = reject_rate(q, 200, [&](const SampleSource& s) {
    return h2_test(s, q, 0.2, 0.1);
  }, 3);
  EXPECT_LE(rate, 0.1);
}

TEST(H2TestTest, InvalidSpecs) {
  Rng rng(1);
  const std::vector<double> p{0.5, 0.5};
  const auto src = source_for(p, rng);
  const std::vector<double> one{1.0};
  const std::vector<double> hole{1.0, 0.0};
  for (const auto& q : {one, hole}) {
    try {
      h2_test(src, q, 0.1, 0.1);
      FAIL() << "expected an error";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidSpec);
    }
  }
  EXPECT_THROW(h2_test(src, p, 0.0, 0.1), Error);
  EXPECT_THROW(h2_test(src, p, 0.1, 0.5), Error);
  EXPECT_THROW(kl_test(src, hole, 0.1, 0.1), Error);
}

TEST(KlTestTest, SampleCountFormula) {
  for (auto [d, eta, eps, delta] :
       {std::tuple{2u, 0.3, 0.3, 0.1}, std::tuple{10u, 0.05, 0.3, 0.1},
        std::tuple{5u, 0.01, 0.05, 0.001}}) {
    const double per = std::ceil(16.0 * std::sqrt(double(d)) *
                                 std::log(std::exp(2.0) / eta) / eps);
    const double reps = std::ceil(2.0 * std::log(1.0 / delta));
    EXPECT_EQ(kl_test_sample_count(d, eta, eps, delta),
              static_cast<std::uint64_t>(per * reps));
    std::vector<double> q(d, (1.0 - eta) / (d - 1));
    q[0] = eta;
    Rng rng(5);
    const auto v = kl_test(source_for(q, rng), q, eps, delta);
    EXPECT_EQ(v.samples_used, kl_test_sample_count(d, eta, eps, delta));
    EXPECT_EQ(v.repetitions, static_cast<std::size_t>(reps));
  }
  EXPECT_EQ(c_kl_test(), 16.0);
}

TEST(KlTestTest, Guarantees) {
  const std::vector<double> q{0.3, 0.7};
  const double null_rate = reject_rate(q, 200, [&](const SampleSource& s) {
    return kl_test(s, q, 0.3, 0.1);
  }, 6);
  EXPECT_LE(null_rate, 0.1);
  // KL((0.75, 0.25) || q) = 0.62 >= 0.3.
  const std::vector<double> p{0.75, 0.25};
  ASSERT_GE(kl(p, q), 0.3);
  const double alt_rate = reject_rate(p, 200, [&](const SampleSource& s) {
    return kl_test(s, q, 0.3, 0.1);
  }, 7);
  EXPECT_GE(alt_rate, 0.9);
}

TEST(KlTestTest, HellingerDominatesScaledKl) {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 3000; ++rep) {
    const auto p = reference::random_law(2 + rep % 19, rng, 3.0);
    const auto q = reference::random_law(p.size(), rng, 3.0);
    const double eta = *std::min_element(q.begin(), q.end());
    EXPECT_GE(hellinger_sq(p, q), kl(p, q) / (2.0 - std::log(eta)) - 1e-12);
  }
}

TEST(KlTestTest, RejectRateMonotoneInKl) {
  const std::vector<double> q(10, 0.1);
  std::vector<double> rates;
  for (double target : {0.01, 0.02, 0.2}) {
    const auto p = shifted(q, target);
    rates.push_back(reject_rate(p, 500, [&](const SampleSource& s) {
      return kl_test(s, q, 0.3, 0.1);
    }, 9));
  }
  const auto a = wilson_interval(static_cast<std::size_t>(rates[0] * 500), 500);
  const auto c = wilson_interval(static_cast<std::size_t>(rates[2] * 500), 500);
  EXPECT_LE(rates[0], rates[1] + 1e-12);
  EXPECT_LE(rates[1], rates[2] + 1e-12);
  EXPECT_LT(a.hi, c.lo);
}

TEST(VerdictTest, Json) {
  TestVerdict v;
  v.verdict = Verdict::kReject;
  v.samples_used = 12;
  EXPECT_EQ(v.to_json().dump(), R"({"samples_used":12,"verdict":"reject"})");
}

}  // namespace
}  // namespace mixate
