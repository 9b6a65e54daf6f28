#include "mixate/oracle.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "instances.hpp"
#include "mixate/error.hpp"
#include "mixate/stats.hpp"

namespace mixate {
namespace {

TEST(BudgetTest, ChargesUntilLimit) {
  Budget b(3);
  b.charge();
  b.charge(2);
  EXPECT_EQ(b.consumed(), 3u);
  try {
    b.charge();
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBudgetExhausted);
  }
  EXPECT_EQ(b.consumed(), 3u);
}

TEST(GeneralOracleTest, PointMass) {
  const Config x0{1, 0, 1};
  OracleHandle h(DenseDistribution::point_mass(StateSpace(Alphabet(2), 3), x0), 1);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(h.general_sample(), x0);
  EXPECT_EQ(h.counters().general_calls, 50u);
  EXPECT_EQ(h.counters().coordinate_calls, 0u);
}

TEST(GeneralOracleTest, FrequenciesMatchTable) {
  StateSpace space(Alphabet(2), 2);
  const DenseDistribution pi(space, {0.1, 0.2, 0.3, 0.4});
  OracleHandle h(pi, 2);
  const int draws = 100000;
  std::vector<double> counts(4, 0.0);
  for (int i = 0; i < draws; ++i) counts[h.general_sample_index()] += 1.0;
  for (std::size_t x = 0; x < 4; ++x) {
    const double sd = std::sqrt(draws * pi[x] * (1 - pi[x]));
    EXPECT_NEAR(counts[x], draws * pi[x], 4 * sd);
  }
  EXPECT_EQ(h.counters().general_calls, static_cast<std::uint64_t>(draws));
}

TEST(CoordinateOracleTest, ProductIgnoresContext) {
  OracleHandle h(DenseDistribution::bernoulli_product(3, 0.8), 3);
  const int draws = 20000;
  int ones = 0;
  for (int i = 0; i < draws; ++i) {
    ones += h.coordinate_sample(Config{static_cast<Symbol>(i % 2), 0, 1}, 1) == 1;
  }
  EXPECT_NEAR(ones / static_cast<double>(draws), 0.8, 4 * std::sqrt(0.16 / draws));
  EXPECT_EQ(h.counters().coordinate_calls, static_cast<std::uint64_t>(draws));
}

TEST(CoordinateOracleTest, FrequenciesMatchSlice) {
  std::mt19937_64 rng(4);
  const auto pi = testing::random_distribution(3, 3, rng, 2.0);
  OracleHandle h(pi, 5);
  const Config x{2, 0, 1};
  const auto slice = conditional_slice(pi, x, 2);
  const int draws = 100000;
  std::vector<double> counts(3, 0.0);
  for (int i = 0; i < draws; ++i) counts[h.coordinate_sample(x, 2)] += 1.0;
  for (std::size_t b = 0; b < 3; ++b) {
    const double p = slice.law[b];
    EXPECT_NEAR(counts[b], draws * p, 4 * std::sqrt(draws * p * (1 - p)));
  }
}

TEST(CoordinateOracleTest, BudgetEnforced) {
  OracleHandle h(DenseDistribution::bernoulli_product(2, 0.5), 6);
  Budget b(2);
  h.coordinate_sample(Config{0, 0}, 0, &b);
  h.coordinate_sample(Config{0, 0}, 1, &b);
  EXPECT_THROW(h.coordinate_sample(Config{0, 0}, 0, &b), Error);
  EXPECT_EQ(h.counters().coordinate_calls, 2u);
}

TEST(CoordinateOracleTest, ZeroMassSlice) {
  OracleHandle h(
      DenseDistribution::point_mass(StateSpace(Alphabet(2), 2), Config{0, 0}), 7);
  try {
    h.coordinate_sample(Config{1, 1}, 0);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnsupportedSlice);
  }
}

TEST(GlauberBackendTest, MatchesExactBackend) {
  std::mt19937_64 rng(8);
  const auto pi = testing::random_distribution(2, 3, rng, 2.0);
  OracleHandle exact(pi, 9, OracleBackend::kExactSlice);
  OracleHandle glauber(pi, 10, OracleBackend::kGlauber);
  EXPECT_TRUE(glauber.reports_site_updates());
  EXPECT_FALSE(exact.reports_site_updates());
  const Config x{1, 0, 1};
  const int draws = 100000;
  std::vector<std::uint64_t> a(2, 0), b(2, 0);
  for (int i = 0; i < draws; ++i) {
    ++a[exact.coordinate_sample(x, 1)];
    ++b[glauber.coordinate_sample(x, 1)];
  }
  EXPECT_GT(two_sample_chi_square(a, b).p_value, 1e-3);
}

TEST(GlauberBackendTest, AttemptsAverageN) {
  const auto pi = DenseDistribution::bernoulli_product(4, 0.3);
  OracleHandle h(pi, 11, OracleBackend::kGlauber);
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) h.coordinate_sample(Config{0, 1, 0, 1}, 2);
  // Geometric(1/n): mean n, variance n(n-1).
  const double mean = static_cast<double>(h.glauber_attempts()) / draws;
  EXPECT_NEAR(mean, 4.0, 3 * std::sqrt(4.0 * 3.0 / draws));
}

TEST(GlauberBackendTest, SingleSiteAlwaysAccepted) {
  OracleHandle h(DenseDistribution::bernoulli_product(1, 0.3), 12,
                 OracleBackend::kGlauber);
  for (int i = 0; i < 100; ++i) h.coordinate_sample(Config{0}, 0);
  EXPECT_EQ(h.glauber_attempts(), 100u);
}

TEST(OracleTest, DeterministicStreams) {
  std::mt19937_64 rng(13);
  const auto pi = testing::random_distribution(2, 3, rng);
  for (auto backend : {OracleBackend::kExactSlice, OracleBackend::kGlauber}) {
    OracleHandle a(pi, 42, backend), b(pi, 42, backend);
    for (int i = 0; i < 200; ++i) {
      ASSERT_EQ(a.general_sample_index(), b.general_sample_index());
      ASSERT_EQ(a.coordinate_sample(Config{0, 1, 1}, i % 3),
                b.coordinate_sample(Config{0, 1, 1}, i % 3));
    }
  }
}

TEST(OracleTest, CounterJson) {
  OracleHandle h(DenseDistribution::bernoulli_product(2, 0.5), 1);
  h.general_sample();
  h.coordinate_sample(Config{0, 0}, 0);
  const auto j = h.counters().to_json();
  EXPECT_EQ(j["general_calls"], 1);
  EXPECT_EQ(j["coordinate_calls"], 1);
}

TEST(RestrictedPairsTest, QueriesOnlyListedPairs) {
  OracleHandle h(DenseDistribution::bernoulli_product(3, 0.5), 14);
  Rng rng(15);
  const auto pairs = RestrictedPairSet::draw(h, 10, rng);
  EXPECT_EQ(pairs.size(), 10u);
  EXPECT_EQ(h.counters().general_calls, 10u);
  RestrictedCoordinateOracle coord(h, pairs);
  for (std::size_t k = 0; k < 10; ++k) coord.sample(k);
  EXPECT_THROW(coord.sample(10), Error);
  EXPECT_EQ(h.counters().coordinate_calls, 10u);
}

}  // namespace
}  // namespace mixate
