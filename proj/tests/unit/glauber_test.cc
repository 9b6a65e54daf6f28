#include "mixate/glauber.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "instances.hpp"
#include "mixate/divergence.hpp"
#include "mixate/error.hpp"
#include "mixate/functional_constants.hpp"
#include "mixate/mixture.hpp"
#include "mixate/stats.hpp"
#include "reference.hpp"

namespace mixate {
namespace {

reference::Vec as_vec(std::span<const double> s) { return {s.begin(), s.end()}; }

TEST(TransitionMatrixTest, UniformTwoSites) {
  const auto mu = DenseDistribution::uniform(StateSpace(Alphabet(2), 2));
  const TransitionMatrix P(mu);
  EXPECT_DOUBLE_EQ(P.entry(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(P.entry(0, 1), 0.25);
  EXPECT_DOUBLE_EQ(P.entry(0, 2), 0.25);
  EXPECT_DOUBLE_EQ(P.entry(0, 3), 0.0);
}

TEST(TransitionMatrixTest, MatchesReferenceAndIsReversible) {
  std::mt19937_64 rng(1);
  for (auto [q, n] : {std::pair{2u, 3u}, std::pair{3u, 4u}, std::pair{3u, 2u}}) {
    const auto mu = testing::random_distribution(q, n, rng, 2.0);
    const TransitionMatrix P(mu);
    const auto ref = reference::glauber_matrix(as_vec(mu.probs()), q, n);
    const std::size_t N = mu.size();
    std::vector<double> stat(N);
    P.apply_left(mu.probs(), stat);
    for (std::size_t x = 0; x < N; ++x) {
      double row = 0.0;
      for (std::size_t y = 0; y < N; ++y) {
        const double pxy = P.entry(x, y);
        row += pxy;
        EXPECT_NEAR(pxy, ref(static_cast<long>(x), static_cast<long>(y)), 1e-15);
        EXPECT_NEAR(mu[x] * pxy, mu[y] * P.entry(y, x), 1e-12);
        if (mu.space().hamming(x, y) > 1) {
          EXPECT_EQ(pxy, 0.0);
        }
      }
      EXPECT_NEAR(row, 1.0, 1e-10);
      EXPECT_NEAR(stat[x], mu[x], 1e-10);
    }
  }
}

TEST(TransitionMatrixTest, ApplyRightIsRowAverage) {
  std::mt19937_64 rng(2);
  const auto mu = testing::random_distribution(3, 2, rng);
  const TransitionMatrix P(mu);
  const auto f = testing::random_density(mu.size(), rng);
  std::vector<double> pf(mu.size());
  P.apply_right(f.values(), pf);
  for (std::size_t x = 0; x < mu.size(); ++x) {
    double s = 0.0;
    for (std::size_t y = 0; y < mu.size(); ++y) s += P.entry(x, y) * f[y];
    EXPECT_NEAR(pf[x], s, 1e-14);
  }
}

TEST(TransitionMatrixTest, UnsupportedSlice) {
  const auto mu =
      DenseDistribution::point_mass(StateSpace(Alphabet(2), 2), Config{0, 0});
  try {
    TransitionMatrix P(mu);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnsupportedSlice);
  }
}

TEST(GlauberStepTest, EmpiricalRowMatchesExact) {
  std::mt19937_64 gen(3);
  const auto mu = testing::random_distribution(2, 3, gen);
  const TransitionMatrix P(mu);
  const SliceSampler sampler{&mu};
  const Config x0{0, 1, 1};
  const std::size_t x = mu.space().encode(x0);
  Rng rng(5);
  const std::size_t steps = 1000000;
  std::vector<double> counts(mu.size(), 0.0);
  for (std::size_t s = 0; s < steps; ++s) {
    counts[mu.space().encode(glauber_step(x0, sampler, rng))] += 1.0;
  }
  for (std::size_t y = 0; y < mu.size(); ++y) {
    const double p = P.entry(x, y);
    const double se = std::sqrt(p * (1.0 - p) / steps);
    EXPECT_NEAR(counts[y] / steps, p, 3.0 * se + 1e-12) << "y=" << y;
  }
}

TEST(GlauberStepTest, PointMassNeverMoves) {
  const Config x0{1, 0, 1};
  const auto mu = DenseDistribution::point_mass(StateSpace(Alphabet(2), 3), x0);
  const SliceSampler sampler{&mu};
  Rng rng(1);
  Config x = x0;
  for (int s = 0; s < 1000; ++s) {
    x = glauber_step(x, sampler, rng);
    ASSERT_EQ(x, x0);
  }
}

TEST(GlauberStepTest, UniformOccupancy) {
  const auto mu = DenseDistribution::uniform(StateSpace(Alphabet(2), 3));
  const SliceSampler sampler{&mu};
  Rng rng(2);
  Config x{0, 0, 0};
  std::vector<std::uint64_t> counts(8, 0);
  for (int s = 0; s < 20000; ++s) {
    for (int k = 0; k < 30; ++k) x = glauber_step(x, sampler, rng);
    ++counts[mu.space().encode(x)];
  }
  const std::vector<double> p(8, 0.125);
  EXPECT_GT(chi_square_gof(counts, p).p_value, 1e-4);
}

TEST(GlauberDynamicsTest, ReportsSites) {
  const auto mu = DenseDistribution::bernoulli_product(3, 0.4);
  GlauberDynamics dyn(mu);
  Rng rng(4);
  dyn.reset(0);
  for (int s = 0; s < 100; ++s) {
    const std::size_t before = dyn.state();
    const auto u = dyn.step(rng);
    EXPECT_LT(u.site, 3u);
    EXPECT_EQ(dyn.state(), mu.space().with_symbol(before, u.site, u.symbol));
  }
}

TEST(EvolveTest, ZeroTimeIsIdentity) {
  std::mt19937_64 rng(5);
  const auto mu = testing::random_distribution(2, 3, rng);
  const auto pi = testing::random_distribution(2, 3, rng);
  const auto out = evolve_continuous(pi, mu, 0.0);
  for (std::size_t x = 0; x < mu.size(); ++x) EXPECT_EQ(out[x], pi[x]);
}

TEST(EvolveTest, NegativeTime) {
  const auto mu = DenseDistribution::bernoulli_product(2, 0.5);
  try {
    evolve_continuous(mu, mu, -1.0);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidTime);
  }
}

TEST(EvolveTest, MatchesMatrixExponential) {
  std::mt19937_64 rng(6);
  for (double t : {0.3, 2.0, 17.0, 150.0}) {
    const auto mu = testing::random_distribution(3, 2, rng, 2.0);
    const auto pi = testing::random_distribution(3, 2, rng, 2.0);
    const auto P = reference::glauber_matrix(as_vec(mu.probs()), 3, 2);
    const auto ref = reference::evolve_expm(P, as_vec(pi.probs()), t);
    const auto out = evolve_continuous(pi, mu, t);
    double total = 0.0;
    for (std::size_t x = 0; x < mu.size(); ++x) {
      EXPECT_NEAR(out[x], ref[x], 1e-11) << "t=" << t;
      EXPECT_GE(out[x], 0.0);
      total += out[x];
    }
    EXPECT_NEAR(total, 1.0, 1e-10);
  }
}

TEST(EvolveTest, SemigroupLaw) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int rep = 0; rep < 10; ++rep) {
    const auto mu = testing::random_distribution(2, 4, rng);
    const auto pi = testing::random_distribution(2, 4, rng, 2.0);
    const double s = u(rng), t = u(rng);
    const auto joint = evolve_continuous(pi, mu, s + t);
    const auto split = evolve_continuous(evolve_continuous(pi, mu, t), mu, s);
    for (std::size_t x = 0; x < mu.size(); ++x) {
      EXPECT_NEAR(joint[x], split[x], 1e-9);
    }
  }
}

TEST(EvolveTest, ProductComponentReachesStationarity) {
  const auto mu = DenseDistribution::bernoulli_product(3, 0.7);
  const auto pi = DenseDistribution::point_mass(mu.space(), Config{0, 0, 0});
  // c* = 1 for a product law, t = 50 c* n.
  const auto out = evolve_continuous(pi, mu, 50.0 * 3);
  EXPECT_LE(total_variation(out, mu), 1e-6);
}

TEST(EvolutionCurveTest, MonotoneAndCsv) {
  std::mt19937_64 rng(8);
  const auto mu = testing::random_distribution(2, 4, rng);
  const auto pi = testing::random_distribution(2, 4, rng, 3.0);
  const TransitionMatrix P(mu);
  std::vector<double> grid;
  for (int g = 0; g <= 40; ++g) grid.push_back(0.5 * g);
  const auto curve = evolution_curve(P, pi.probs(), grid);
  for (std::size_t g = 1; g < grid.size(); ++g) {
    EXPECT_LE(curve.kl_nats[g], curve.kl_nats[g - 1] + 1e-9);
  }
  const std::string csv = curve.to_csv();
  EXPECT_EQ(csv.substr(0, 10), "t,kl_nats\n");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 42);
}

TEST(DirichletFormTest, Examples) {
  const auto mu = DenseDistribution::uniform(StateSpace(Alphabet(2), 1));
  const TransitionMatrix P(mu);
  const DensityFunction f({0.0, 1.0});
  EXPECT_DOUBLE_EQ(dirichlet_form(P, f, f), 0.5);
  const auto c = DensityFunction::constant(2, 3.0);
  EXPECT_EQ(dirichlet_form(P, c, f), 0.0);
}

TEST(DirichletFormTest, SymmetricAndMatchesReference) {
  std::mt19937_64 rng(9);
  for (int rep = 0; rep < 10; ++rep) {
    const auto mu = testing::random_distribution(3, 3, rng);
    const TransitionMatrix P(mu);
    const auto f = testing::random_density(mu.size(), rng);
    const auto g = testing::random_density(mu.size(), rng);
    const double fg = dirichlet_form(P, f, g);
    EXPECT_NEAR(fg, dirichlet_form(P, g, f), 1e-14);
    const auto ref = reference::glauber_matrix(as_vec(mu.probs()), 3, 3);
    EXPECT_NEAR(fg,
                reference::dirichlet(ref, as_vec(mu.probs()),
                                     as_vec(f.values()), as_vec(g.values())),
                1e-13);
    for (auto phi : {PhiFunctional::u_log_u(), PhiFunctional::u_squared()}) {
      EXPECT_GE(dirichlet_form_phi(P, f.values(), phi), 0.0);
    }
  }
}

TEST(EdgeFormTest, LowerBoundsMixtureDirichletForm) {
  std::mt19937_64 rng(10);
  for (int rep = 0; rep < 30; ++rep) {
    const auto model = testing::random_mixture(1 + rep % 3, 2, 1 + rep % 4, rng);
    const TransitionMatrix P(model.mixture());
    const auto f = testing::random_density(model.mixture().size(), rng);
    for (auto phi : {PhiFunctional::u_log_u(), PhiFunctional::u_squared()}) {
      const double exact = dirichlet_form_phi(P, f.values(), phi);
      const double edge = edge_form_lower_bound(model, f.values(), phi);
      EXPECT_GE(exact, edge - 1e-9);
      if (model.k() == 1) {
        EXPECT_NEAR(exact, edge, 1e-12);
      }
    }
  }
}

TEST(DerivativeCheckTest, StationaryPoint) {
  const auto mu = DenseDistribution::bernoulli_product(3, 0.7);
  const auto c = entropy_decay_derivative_check(mu, mu, 1.0);
  EXPECT_NEAR(c.lhs, 0.0, 1e-9);
  EXPECT_NEAR(c.rhs, 0.0, 1e-12);
}

TEST(DerivativeCheckTest, MatchesHalfDirichletForm) {
  std::mt19937_64 rng(11);
  const auto mu = DenseDistribution::bernoulli_product(3, 0.7);
  for (double t : {0.0, 0.5, 1.0, 4.0}) {
    const auto pi = testing::random_distribution(2, 3, rng, 2.0);
    const auto c = entropy_decay_derivative_check(pi, mu, t);
    EXPECT_TRUE(c.matches()) << "t=" << t << " lhs=" << c.lhs << " rhs=" << c.rhs;
    EXPECT_LE(c.rhs, 0.0);
    // Without the 1/2 the match fails by a factor of two.
    EXPECT_NEAR(c.literal_rhs, 2.0 * c.rhs, 1e-15);
  }
}

TEST(DerivativeCheckTest, UndefinedAtZeroWithInfiniteKl) {
  StateSpace space(Alphabet(2), 1);
  const DenseDistribution mu(space, {1.0, 0.0});
  const DenseDistribution pi(space, {0.5, 0.5});
  try {
    entropy_decay_derivative_check(pi, mu, 0.0);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDerivativeUndefined);
  }
}

TEST(ContractionTest, SingleComponentDecaysAtMlsiRate) {
  std::mt19937_64 rng(12);
  for (int rep = 0; rep < 5; ++rep) {
    const auto mu = testing::random_distribution(2, 3, rng);
    const double c = estimate_mlsi_constant(mu).lower;
    const auto pi = testing::random_distribution(2, 3, rng, 3.0);
    const TransitionMatrix P(mu);
    std::vector<double> grid;
    for (int g = 0; g <= 30; ++g) grid.push_back(0.5 * g);
    const auto curve = evolution_curve(P, pi.probs(), grid);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      EXPECT_LE(curve.kl_nats[g],
                std::exp(-grid[g] / (2.0 * c)) * curve.kl_nats[0] * (1 + 1e-6))
          << "t=" << grid[g];
    }
  }
}

}  // namespace
}  // namespace mixate
