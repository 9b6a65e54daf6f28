#include "mixate/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mixate/divergence.hpp"
#include "mixate/error.hpp"
#include "mixate/parallel.hpp"
#include "mixate/random.hpp"
#include "mixate/serialize.hpp"
#include "mixate/stats.hpp"

namespace mixate {

DenseDistribution EmpiricalDistribution::to_dense(
    const StateSpace& space) const {
  std::vector<double> probs(space.size(), 0.0);
  for (std::size_t x : atoms) probs[x] += 1.0;
  return DenseDistribution::from_weights(space, std::move(probs));
}

EmpiricalDistribution draw_empirical(const DenseDistribution& mu,
                                     std::size_t m, std::uint64_t seed) {
  if (m == 0) {
    throw Error(ErrorCode::kInvalidParameter, "need at least one sample");
  }
  EmpiricalDistribution emp;
  emp.seed = seed;
  Rng rng(seed);
  emp.atoms.reserve(m);
  for (std::size_t j = 0; j < m; ++j) emp.atoms.push_back(mu.sample_index(rng));
  return emp;
}

nlohmann::json ConcentrationReport::to_json() const {
  return {{"kind", kind},         {"k", k},   {"m", m},
          {"parameter", parameter}, {"pass", pass}, {"estimate", estimate},
          {"bound", bound},       {"se", se}, {"trials", trials}};
}

double kl_mgf_bound(std::size_t k, std::size_t m, double lambda) {
  return std::pow(1.0 / (1.0 - lambda / static_cast<double>(m)),
                  static_cast<double>(k - 1));
}

double kl_tail_bound(std::size_t k, std::size_t m, double eps) {
  const double em = eps * static_cast<double>(m);
  if (k == 1) return std::exp(-em);
  const double km1 = static_cast<double>(k - 1);
  // In logs to keep e^{-em} from underflowing before the product.
  return std::exp(-em + km1 * std::log(std::exp(1.0) * em / km1));
}

namespace {

void validate_rho(std::span<const double> rho) {
  if (rho.empty()) {
    throw Error(ErrorCode::kInvalidParameter, "empty law");
  }
  double total = 0.0;
  for (double r : rho) {
    if (!(r > 0.0)) {
      throw Error(ErrorCode::kInvalidParameter, "law must be positive");
    }
    total += r;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidParameter, "law must sum to 1");
  }
}

void validate_lambda(std::size_t m, double lambda) {
  if (m == 0 || !(lambda >= 0.0) || !(lambda < static_cast<double>(m))) {
    throw Error(ErrorCode::kInvalidParameter,
                "need m >= 1 and 0 <= lambda < m");
  }
}

// KL(empirical || rho) for one m-sample draw.
double empirical_kl_once(const CdfSampler& sampler, std::span<const double> rho,
                         std::size_t m, Rng& rng,
                         std::vector<double>& counts) {
  std::fill(counts.begin(), counts.end(), 0.0);
  for (std::size_t j = 0; j < m; ++j) counts[sampler(rng)] += 1.0;
  for (double& c : counts) c /= static_cast<double>(m);
  return kl(counts, rho);
}

template <typename TrialFn>
std::vector<double> run_trials(const MonteCarloOptions& options,
                               TrialFn&& fn) {
  std::vector<double> values(options.trials);
  parallel_for(options.trials, options.jobs, [&](std::size_t t) {
    Rng rng(derive_seed(options.seed, t));
    values[t] = fn(rng);
  });
  return values;
}

ConcentrationReport mgf_report(std::size_t k, std::size_t m, double lambda,
                               std::span<const double> values) {
  ConcentrationReport r;
  r.kind = "mgf";
  r.k = k;
  r.m = m;
  r.parameter = lambda;
  r.trials = values.size();
  const MeanEstimate est = mean_estimate(values);
  r.estimate = est.mean;
  r.se = est.se;
  r.bound = kl_mgf_bound(k, m, lambda);
  const double rse = r.estimate > 0.0 ? r.se / r.estimate : 0.0;
  r.pass = r.estimate <= r.bound * (1.0 + 3.0 * rse);
  return r;
}

}  // namespace

ConcentrationReport empirical_kl_mgf(std::span<const double> rho,
                                     std::size_t m, double lambda,
                                     const MonteCarloOptions& options) {
  validate_rho(rho);
  validate_lambda(m, lambda);
  const CdfSampler sampler(rho);
  const std::vector<double> values = run_trials(options, [&](Rng& rng) {
    std::vector<double> counts(rho.size());
    return std::exp(lambda * empirical_kl_once(sampler, rho, m, rng, counts));
  });
  return mgf_report(rho.size(), m, lambda, values);
}

ConcentrationReport empirical_kl_tail(std::span<const double> rho,
                                      std::size_t m, double eps,
                                      const MonteCarloOptions& options) {
  validate_rho(rho);
  const std::size_t k = rho.size();
  if (m == 0 || !(eps > static_cast<double>(k - 1) / static_cast<double>(m))) {
    throw Error(ErrorCode::kInvalidParameter, "need eps > (k-1)/m");
  }
  const CdfSampler sampler(rho);
  const std::vector<double> values = run_trials(options, [&](Rng& rng) {
    std::vector<double> counts(k);
    return empirical_kl_once(sampler, rho, m, rng, counts) > eps ? 1.0 : 0.0;
  });
  ConcentrationReport r;
  r.kind = "tail";
  r.k = k;
  r.m = m;
  r.parameter = eps;
  r.trials = values.size();
  r.estimate = std::accumulate(values.begin(), values.end(), 0.0) /
               static_cast<double>(values.size());
  r.se = binomial_se(r.estimate, values.size());
  r.bound = kl_tail_bound(k, m, eps);
  r.pass = r.estimate <= r.bound + 3.0 * r.se;
  return r;
}

nlohmann::json MixtureMgfReport::to_json() const {
  return {{"pass", pass},
          {"dominated", dominated},
          {"mixture", mixture.to_json()},
          {"disjoint", disjoint.to_json()}};
}

MixtureMgfReport mixture_posterior_mgf(const MixtureModel& model,
                                       std::size_t m, double lambda,
                                       const MonteCarloOptions& options) {
  validate_lambda(m, lambda);
  const std::size_t k = model.k();
  const DenseDistribution& mu = model.mixture();
  // Posterior table, row per state.
  std::vector<double> post(mu.size() * k, 0.0);
  for (std::size_t x = 0; x < mu.size(); ++x) {
    if (mu[x] > 0.0) {
      posterior_at(model, x, std::span<double>(post.data() + x * k, k));
    }
  }
  const auto rho = model.weights();
  const std::vector<double> values = run_trials(options, [&](Rng& rng) {
    std::vector<double> avg(k, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t x = mu.sample_index(rng);
      for (std::size_t a = 0; a < k; ++a) avg[a] += post[x * k + a];
    }
    for (double& v : avg) v /= static_cast<double>(m);
    return std::exp(lambda * kl(avg, rho));
  });

  MixtureMgfReport report;
  report.mixture = mgf_report(k, m, lambda, values);
  MonteCarloOptions other = options;
  other.seed = derive_seed(options.seed, 0xd15c0u);
  report.disjoint = empirical_kl_mgf(rho, m, lambda, other);
  const double combined = std::hypot(report.mixture.se, report.disjoint.se);
  report.dominated =
      report.mixture.estimate <= report.disjoint.estimate + 3.0 * combined;
  report.pass = report.mixture.pass && report.dominated;
  return report;
}

Trajectory mixture_trajectory(const MixtureModel& model,
                              const TransitionMatrix& P,
                              std::span<const double> pi,
                              std::span<const double> grid) {
  const EvolutionCurve curve = evolution_curve(P, pi, grid, true);
  Trajectory tr;
  tr.times = curve.times;
  tr.kl_nats = curve.kl_nats;
  for (const auto& snap : curve.snapshots) {
    const DenseDistribution law =
        DenseDistribution::from_weights(model.space(), snap);
    tr.inter_kl_nats.push_back(kl(rho_of(model, law), model.weights()));
  }
  return tr;
}

Trajectory point_mass_trajectory(const MixtureModel& model, const Config& x0,
                                 std::span<const double> grid) {
  const TransitionMatrix P(model.mixture());
  const DenseDistribution start =
      DenseDistribution::point_mass(model.space(), x0);
  return mixture_trajectory(model, P, start.probs(), grid);
}

double mixing_rate_constant(const MixtureModel& model,
                            const EstimatorOptions& options) {
  double worst = 0.0;
  for (const auto& c : model.components()) {
    worst = std::max(worst, estimate_mlsi_constant(c, options).lower);
  }
  return 1.1 * 2.0 * worst / static_cast<double>(model.space().n());
}

std::size_t warm_start_sample_size(std::size_t k, double eps, double delta) {
  if (!(eps > 0.0) || !(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::kInvalidParameter, "need eps > 0, delta in (0,1)");
  }
  return static_cast<std::size_t>(std::ceil(
      kSampleMultiplier *
      (static_cast<double>(k) / eps + std::log(1.0 / delta) / eps)));
}

MixingHorizons mixing_horizons(const MixtureModel& model, double cstar,
                               double eps) {
  const double min_mu = model.mixture().min_prob();
  if (!(min_mu > 0.0)) {
    throw Error(ErrorCode::kInvalidParameter, "mu must be fully supported");
  }
  const double scale =
      kMixingMultiplier * cstar * static_cast<double>(model.space().n());
  const double log_inv = std::log(1.0 / min_mu);
  MixingHorizons h;
  h.loglog = scale * (std::log(std::max(log_inv, 1.0)) + std::log(1.0 / eps));
  h.log = scale * (log_inv + std::log(1.0 / eps));
  return h;
}

std::string WarmStartReport::curves_csv() const {
  std::string out = "trial,t,kl_nats,inter_kl_nats\n";
  for (std::size_t r = 0; r < trials.size(); ++r) {
    const Trajectory& tr = trials[r].trajectory;
    for (std::size_t g = 0; g < tr.times.size(); ++g) {
      out += std::to_string(r);
      out += ',';
      out += format_double(tr.times[g]);
      out += ',';
      out += format_double(tr.kl_nats[g]);
      out += ',';
      out += format_double(tr.inter_kl_nats[g]);
      out += '\n';
    }
  }
  return out;
}

nlohmann::json WarmStartReport::summary() const {
  nlohmann::json j;
  j["m"] = m;
  j["cstar"] = cstar;
  j["horizon_loglog"] = horizons.loglog;
  j["horizon_log"] = horizons.log;
  j["horizon_used"] = grid.empty() ? 0.0 : grid.back();
  j["trials"] = trials.size();
  j["reached"] = reached;
  j["required"] = required;
  j["mixing_pass"] = mixing_pass;
  j["weak_mixing_pass"] = weak_mixing_pass;
  j["weak_mixing_time_bound"] = "sup over grid";
  j["tail_transfer_time_average"] = "grid average";
  j["tail_transfer"] = tail_transfer.to_json();
  j["pass"] = mixing_pass && weak_mixing_pass && tail_transfer.pass;
  return j;
}

WarmStartReport warm_start_mixing(const MixtureModel& model,
                                  const WarmStartOptions& options) {
  const std::size_t k = model.k();
  const std::size_t n = model.space().n();
  WarmStartReport report;
  report.m = options.m > 0
                 ? options.m
                 : warm_start_sample_size(k, options.eps, options.delta);
  report.cstar =
      options.cstar > 0.0 ? options.cstar : mixing_rate_constant(model);
  report.horizons = mixing_horizons(model, report.cstar, options.eps);
  if (options.grid.empty()) {
    const std::size_t points = std::max<std::size_t>(options.grid_points, 2);
    for (std::size_t g = 0; g < points; ++g) {
      report.grid.push_back(report.horizons.loglog * static_cast<double>(g) /
                            static_cast<double>(points - 1));
    }
  } else {
    report.grid = options.grid;
  }
  for (double t : report.grid) {
    if (!(t >= 0.0)) throw Error(ErrorCode::kInvalidTime, "negative time");
  }

  const TransitionMatrix P(model.mixture());
  const double rate = 1.0 - 1.0 / (report.cstar * static_cast<double>(n));
  report.trials.resize(options.trials);
  parallel_for(options.trials, options.jobs, [&](std::size_t r) {
    const EmpiricalDistribution emp = draw_empirical(
        model.mixture(), report.m, derive_seed(options.seed, r));
    const DenseDistribution start = emp.to_dense(model.space());
    WarmStartTrial trial;
    trial.trajectory = mixture_trajectory(model, P, start.probs(), report.grid);
    const Trajectory& tr = trial.trajectory;
    trial.reached = tr.kl_nats.back() <= options.eps;
    trial.weak_mixing = true;
    trial.worst_slack = std::numeric_limits<double>::infinity();
    double sup_inter = 0.0;
    for (std::size_t g = 0; g < tr.times.size(); ++g) {
      sup_inter = std::max(sup_inter, tr.inter_kl_nats[g]);
      const double rhs =
          std::pow(std::max(rate, 0.0), tr.times[g]) * tr.kl_nats.front() +
          sup_inter;
      trial.worst_slack = std::min(trial.worst_slack, rhs - tr.kl_nats[g]);
      if (tr.kl_nats[g] > rhs + 1e-8) trial.weak_mixing = false;
    }
    trial.mean_inter =
        std::accumulate(tr.inter_kl_nats.begin(), tr.inter_kl_nats.end(),
                        0.0) /
        static_cast<double>(tr.inter_kl_nats.size());
    report.trials[r] = std::move(trial);
  });

  std::size_t over = 0;
  report.weak_mixing_pass = true;
  for (const auto& t : report.trials) {
    report.reached += t.reached ? 1 : 0;
    report.weak_mixing_pass = report.weak_mixing_pass && t.weak_mixing;
    over += t.mean_inter > options.eps ? 1 : 0;
  }
  const double trials = static_cast<double>(options.trials);
  report.required =
      (1.0 - options.delta) * trials -
      3.0 * std::sqrt(trials * options.delta * (1.0 - options.delta));
  report.mixing_pass = static_cast<double>(report.reached) >= report.required;

  ConcentrationReport& tail = report.tail_transfer;
  tail.kind = "tail";
  tail.k = k;
  tail.m = report.m;
  tail.parameter = options.eps;
  tail.trials = options.trials;
  tail.estimate = static_cast<double>(over) / trials;
  tail.se = binomial_se(tail.estimate, options.trials);
  tail.bound = kl_tail_bound(k, report.m, options.eps);
  tail.pass = tail.estimate <= tail.bound + 3.0 * tail.se;
  return report;
}

}  // namespace mixate
