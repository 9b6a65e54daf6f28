#include "mixate/identity.hpp"

#include <cmath>
#include <optional>

#include <gtest/gtest.h>

#include "instances.hpp"
#include "mixate/divergence.hpp"
#include "mixate/error.hpp"

namespace mixate {
namespace {

using testing::two_bernoulli_mixture;

std::optional<ErrorCode> setup_error(const MixtureModel& model, double eps, double cstar) {
  try {
    AlgorithmParams::make(model, eps, cstar, 1);
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

TEST(AlgorithmParamsTest, Formulas) {
  const auto model = two_bernoulli_mixture(5, 0.1);
  const auto p = AlgorithmParams::make(model, 0.5, 1.1, 3);
  const double eta = balance(model.mixture()).eta;
  EXPECT_DOUBLE_EQ(p.eta, eta);
  const double t1 = std::ceil(std::log(25.0) * 1.1 * 5 / (0.45 * 0.5));
  EXPECT_EQ(p.T1, static_cast<std::uint64_t>(t1));
  const double low = 0.05 * 0.5 / (1.1 * 5);
  const double high = std::log(1 / eta);
  EXPECT_DOUBLE_EQ(p.theta_low(), low);
  EXPECT_DOUBLE_EQ(p.theta_high(), high);
  const double T = 100 * t1 * 16 * std::sqrt(2.0) * high *
                   std::log(20 * t1) * 10 * std::log(high / low);
  EXPECT_NEAR(static_cast<double>(p.T), T, 1.0);
  EXPECT_DOUBLE_EQ(p.step_one_delta(), 0.05 / t1);
  const auto j = p.to_json();
  EXPECT_EQ(j["T1"], p.T1);
  EXPECT_EQ(j["seed"], 3);
}

TEST(AlgorithmParamsTest, InvalidSetup) {
  const auto model = two_bernoulli_mixture(3, 0.2);
  EXPECT_EQ(setup_error(model, 0.0, 1.0), ErrorCode::kInvalidSetup);
  EXPECT_EQ(setup_error(model, 0.5, 0.0), ErrorCode::kInvalidSetup);
  EXPECT_EQ(setup_error(model, 0.5, NAN), ErrorCode::kInvalidSetup);
  const double cap = 3 * std::log(1 / balance(model.mixture()).eta);
  EXPECT_EQ(setup_error(model, 1.01 * cap, 1.0), ErrorCode::kInvalidSetup);
  const MixtureModel holes(
      {1.0}, {DenseDistribution::point_mass(StateSpace(Alphabet(2), 2),
                                            Config{0, 1})});
  EXPECT_EQ(setup_error(holes, 0.1, 1.0), ErrorCode::kInvalidSetup);
}

TEST(AlgorithmParamsTest, ExpectedInverseTheta) {
  const auto p = AlgorithmParams::make(two_bernoulli_mixture(4, 0.2), 0.4,
                                       1.2, 1);
  // Midpoint rule in log space.
  const double lo = p.theta_low(), hi = p.theta_high();
  const int steps = 200000;
  double integral = 0.0;
  const double h = (std::log(hi) - std::log(lo)) / steps;
  for (int s = 0; s < steps; ++s) {
    const double t = std::exp(std::log(lo) + (s + 0.5) * h);
    integral += (1.0 / t) * t * h;
  }
  EXPECT_NEAR(expected_inverse_theta(p), integral / (hi - lo), 1e-9);
}

TEST(StepTwoTest, SingleComponentAcceptsWithoutSamples) {
  const MixtureModel model({1.0}, {DenseDistribution::bernoulli_product(3, 0.3)});
  OracleHandle oracle(model.mixture(), 1);
  const auto p = AlgorithmParams::make(model, 0.5, 1.1, 1);
  Rng rng(2);
  const auto r = step_two_weights(model, oracle, p, rng);
  EXPECT_EQ(r.verdict, Verdict::kAccept);
  EXPECT_EQ(r.samples, 0u);
  EXPECT_EQ(oracle.counters().general_calls, 0u);
}

TEST(ProductSetKlTest, BudgetTripIsReported) {
  const auto model = two_bernoulli_mixture(3, 0.2);
  OracleHandle oracle(model.mixture(), 4);
  auto p = AlgorithmParams::make(model, 1.0, 1.1, 5);
  p.T = 50;
  const auto r = product_set_kl_test(model, oracle, p);
  EXPECT_EQ(r.verdict, Verdict::kReject);
  EXPECT_TRUE(r.step1.budget_tripped);
  EXPECT_FALSE(r.step2_ran);
  EXPECT_LE(r.coordinate_calls, p.T);
  EXPECT_EQ(r.to_json()["step2"]["verdict"], "skipped");
}

TEST(ProductSetKlTest, CountsAndJsonLayout) {
  const auto model = two_bernoulli_mixture(3, 0.2);
  OracleHandle oracle(model.mixture(), 6);
  const auto p = AlgorithmParams::make(model, 1.0, 1.1, 7);
  const auto r = product_set_kl_test(model, oracle, p);
  EXPECT_LE(r.coordinate_calls, p.T);
  EXPECT_EQ(r.coordinate_calls, r.step1.coordinate_calls);
  std::uint64_t per_pair = 0;
  for (const auto& pr : r.step1.pairs) {
    EXPECT_GE(pr.theta, p.theta_low());
    EXPECT_LE(pr.theta, p.theta_high());
    per_pair += pr.coordinate_calls;
  }
  EXPECT_EQ(per_pair, r.step1.coordinate_calls);
  // T1 pair draws plus step two's general samples.
  EXPECT_EQ(r.general_calls, p.T1 + r.step2.samples);
  const auto j = r.to_json();
  for (const char* key : {"verdict", "step1", "step2", "general_calls"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  for (const char* key :
       {"pairs", "rejections", "coordinate_calls", "budget", "budget_tripped"}) {
    EXPECT_TRUE(j["step1"].contains(key)) << key;
  }
  EXPECT_EQ(j["step1"]["pairs"], p.T1);
  EXPECT_EQ(j["step1"]["budget"], p.T);
}

TEST(ProductSetKlTest, Deterministic) {
  const auto model = two_bernoulli_mixture(3, 0.2);
  const auto p = AlgorithmParams::make(model, 1.0, 1.1, 8);
  OracleHandle a(model.mixture(), 9), b(model.mixture(), 9);
  EXPECT_EQ(product_set_kl_test(model, a, p).to_json(),
            product_set_kl_test(model, b, p).to_json());
}

TEST(ProductSetKlTest, SpaceMismatch) {
  const auto model = two_bernoulli_mixture(3, 0.2);
  const auto p = AlgorithmParams::make(model, 1.0, 1.1, 1);
  OracleHandle other(DenseDistribution::bernoulli_product(4, 0.5), 1);
  EXPECT_THROW(product_set_kl_test(model, other, p), Error);
}

TEST(ProductSetKlTest, SmallScaleVerdicts) {
  const auto model = two_bernoulli_mixture(3, 0.2);
  const auto p = AlgorithmParams::make(model, 0.3, 1.1, 10);
  const auto skewed = two_bernoulli_mixture(3, 0.2, 0.99);
  ASSERT_GE(kl_divergence(skewed.mixture(), model.mixture()), 0.3);
  int null_rejects = 0, alt_rejects = 0;
  const int runs = 20;
  for (int r = 0; r < runs; ++r) {
    auto run = p;
    run.seed = derive_seed(11, r);
    OracleHandle same(model.mixture(), derive_seed(12, r));
    OracleHandle far(skewed.mixture(), derive_seed(13, r));
    null_rejects += product_set_kl_test(model, same, run).verdict == Verdict::kReject;
    alt_rejects += product_set_kl_test(model, far, run).verdict == Verdict::kReject;
  }
  EXPECT_LE(null_rejects, 10);
  EXPECT_GE(alt_rejects, 10);
}

TEST(AmplifiedTest, RunCount) {
  const auto model = two_bernoulli_mixture(2, 0.2);
  const auto p = AlgorithmParams::make(model, 1.0, 1.1, 14);
  OracleHandle proto(model.mixture(), 15);
  const auto r = amplified_product_set_kl_test(model, proto, p, 0.2);
  EXPECT_EQ(r.runs, 2 * repetitions(0.2) + 1);
  EXPECT_LE(r.rejections, r.runs);
  EXPECT_EQ(proto.counters().general_calls, 0u);
}

}  // namespace
}  // namespace mixate
