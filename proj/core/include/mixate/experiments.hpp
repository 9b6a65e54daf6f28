#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mixate/distribution.hpp"
#include "mixate/functional_constants.hpp"
#include "mixate/glauber.hpp"
#include "mixate/mixture.hpp"

namespace mixate {

// Harness multipliers: m = kSampleMultiplier (k/eps + ln(1/delta)/eps) and
// horizon kMixingMultiplier * cstar * n * (...).
inline constexpr double kSampleMultiplier = 4.0;
inline constexpr double kMixingMultiplier = 20.0;

struct EmpiricalDistribution {
  std::vector<std::size_t> atoms;  // encoded configs, weight 1/m each
  std::uint64_t seed = 0;

  std::size_t m() const noexcept { return atoms.size(); }
  DenseDistribution to_dense(const StateSpace& space) const;
};

// m i.i.d. draws from mu. Throws InvalidParameter for m = 0.
EmpiricalDistribution draw_empirical(const DenseDistribution& mu,
                                     std::size_t m, std::uint64_t seed);

struct ConcentrationReport {
  std::string kind;  // "mgf" or "tail"
  std::size_t k = 0;
  std::size_t m = 0;
  double parameter = 0.0;  // lambda (mgf) or eps (tail)
  std::size_t trials = 0;
  double estimate = 0.0;
  double se = 0.0;
  double bound = 0.0;
  bool pass = false;

  nlohmann::json to_json() const;
};

struct MonteCarloOptions {
  std::size_t trials = 100000;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
};

// (1/(1 - lambda/m))^(k-1)
double kl_mgf_bound(std::size_t k, std::size_t m, double lambda);
// e^{-eps m} (e eps m / (k-1))^(k-1); e^{-eps m} when k = 1.
double kl_tail_bound(std::size_t k, std::size_t m, double eps);

// E[exp(lambda KL(empirical || rho))] over m-sample empiricals of rho.
// Passes when estimate <= bound (1 + 3 se/estimate).
ConcentrationReport empirical_kl_mgf(std::span<const double> rho,
                                     std::size_t m, double lambda,
                                     const MonteCarloOptions& options);

// Pr[KL(empirical || rho) > eps]. Passes when estimate <= bound + 3 se.
ConcentrationReport empirical_kl_tail(std::span<const double> rho,
                                      std::size_t m, double eps,
                                      const MonteCarloOptions& options);

struct MixtureMgfReport {
  ConcentrationReport mixture;   // posterior-averaged empirical
  ConcentrationReport disjoint;  // same (k, m, lambda), indicator posteriors
  bool dominated = false;  // mixture <= disjoint + 3 combined se
  bool pass = false;       // bound respected and dominated

  nlohmann::json to_json() const;
};

MixtureMgfReport mixture_posterior_mgf(const MixtureModel& model,
                                       std::size_t m, double lambda,
                                       const MonteCarloOptions& options);

// KL(P_t pi || mu) and KL(rho_{P_t pi} || rho) along a grid.
struct Trajectory {
  std::vector<double> times;
  std::vector<double> kl_nats;
  std::vector<double> inter_kl_nats;
};

Trajectory mixture_trajectory(const MixtureModel& model,
                              const TransitionMatrix& P,
                              std::span<const double> pi,
                              std::span<const double> grid);

Trajectory point_mass_trajectory(const MixtureModel& model, const Config& x0,
                                 std::span<const double> grid);

// 1.1 * max_a 2 c_MLSI(mu_a) / n: the per-component rate in the units of
// (1 - 1/(cstar n))^t.
double mixing_rate_constant(const MixtureModel& model,
                            const EstimatorOptions& options = {});

// Samples needed for data-based initialization.
std::size_t warm_start_sample_size(std::size_t k, double eps, double delta);

struct MixingHorizons {
  double loglog = 0.0;  // 20 cstar n (log log(1/min mu) + log(1/eps))
  double log = 0.0;     // 20 cstar n (log(1/min mu) + log(1/eps))
};

MixingHorizons mixing_horizons(const MixtureModel& model, double cstar,
                               double eps);

struct WarmStartOptions {
  std::size_t m = 0;          // 0: warm_start_sample_size(k, eps, delta)
  std::vector<double> grid;   // empty: uniform grid up to the loglog horizon
  std::size_t grid_points = 41;
  std::size_t trials = 200;
  double eps = 0.1;
  double delta = 0.2;
  double cstar = 0.0;  // 0: mixing_rate_constant(model)
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
};

struct WarmStartTrial {
  Trajectory trajectory;
  bool reached = false;      // terminal KL <= eps
  bool weak_mixing = false;  // inequality held at every grid point
  double worst_slack = 0.0;  // min over grid of rhs - lhs
  double mean_inter = 0.0;   // grid average of KL(rho_{P_s pi} || rho)
};

struct WarmStartReport {
  std::size_t m = 0;
  double cstar = 0.0;
  MixingHorizons horizons;
  std::vector<double> grid;
  std::vector<WarmStartTrial> trials;
  std::size_t reached = 0;
  double required = 0.0;  // (1 - delta) trials - 3 sigma
  bool mixing_pass = false;
  bool weak_mixing_pass = false;
  ConcentrationReport tail_transfer;

  std::string curves_csv() const;
  nlohmann::json summary() const;
};

WarmStartReport warm_start_mixing(const MixtureModel& model,
                                  const WarmStartOptions& options);

}  // namespace mixate
