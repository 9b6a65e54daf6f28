#include "mixate/functional_constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "mixate/error.hpp"
#include "mixate/glauber.hpp"
#include "mixate/mixture.hpp"
#include "mixate/random.hpp"

namespace mixate {

namespace {

constexpr double kLogClamp = 300.0;
// Witnesses whose relative variance drops below this are treated as
// constant: the ratio there is 0/0 and only rounding is left.
constexpr double kMinRelativeVariance = 1e-10;

enum class Denominator { kLocalEntropy, kDirichlet };

// Ratio Ent^Phi_mu[f] / D(f) and its gradient in the parameter g, where
// f = exp(g) for u log u and f = 1 + g for u^2.
class RatioProblem {
 public:
  RatioProblem(const DenseDistribution& mu, PhiFunctional phi,
               Denominator denom)
      : mu_(mu), phi_(phi), denom_(denom) {
    if (denom_ == Denominator::kDirichlet) P_.emplace(mu);
  }

  bool log_param() const { return phi_.kind() == PhiKind::kULogU; }
  std::size_t size() const { return mu_.size(); }

  // Brings g to the normal form E_mu f = 1 (and bounded amplitude for
  // the additive parametrization). Both ratios are invariant under this.
  void normalize(std::vector<double>& g) const {
    const auto& m = mu_.probs();
    if (log_param()) {
      double top = -std::numeric_limits<double>::infinity();
      for (std::size_t x = 0; x < g.size(); ++x) {
        if (m[x] > 0.0) top = std::max(top, g[x]);
      }
      double s = 0.0;
      for (std::size_t x = 0; x < g.size(); ++x) s += m[x] * std::exp(g[x] - top);
      const double shift = top + std::log(s);
      for (double& v : g) v = std::clamp(v - shift, -kLogClamp, kLogClamp);
    } else {
      double mean = 0.0;
      for (std::size_t x = 0; x < g.size(); ++x) mean += m[x] * g[x];
      double amp = 0.0;
      for (double& v : g) {
        v -= mean;
        amp = std::max(amp, std::abs(v));
      }
      if (amp > 0.0) {
        for (double& v : g) v *= 0.5 / amp;
      }
    }
  }

  std::vector<double> to_f(const std::vector<double>& g) const {
    std::vector<double> f(g.size());
    for (std::size_t x = 0; x < g.size(); ++x) {
      f[x] = log_param() ? std::exp(g[x]) : 1.0 + g[x];
    }
    return f;
  }

  std::vector<double> from_f(std::span<const double> f) const {
    std::vector<double> g(f.size());
    for (std::size_t x = 0; x < f.size(); ++x) {
      g[x] = log_param() ? std::log(std::max(f[x], 1e-300)) : f[x] - 1.0;
    }
    return g;
  }

  struct Value {
    double num = 0.0;
    double den = 0.0;
  };

  bool degenerate(const std::vector<double>& f) const {
    const auto& m = mu_.probs();
    double mean = 0.0, sq = 0.0;
    for (std::size_t x = 0; x < f.size(); ++x) mean += m[x] * f[x];
    for (std::size_t x = 0; x < f.size(); ++x) {
      sq += m[x] * (f[x] - mean) * (f[x] - mean);
    }
    return !(sq > kMinRelativeVariance * mean * mean);
  }

  Value value(const std::vector<double>& f) const {
    Value v;
    v.num = phi_entropy(mu_.probs(), f, phi_);
    if (denom_ == Denominator::kLocalEntropy) {
      v.den = local_phi_functional(mu_, DensityFunction(f), phi_);
    } else {
      v.den = dirichlet_form_phi(*P_, f, phi_);
    }
    return v;
  }

  // Gradient of log(num) - log(den) with respect to g.
  std::vector<double> gradient(const std::vector<double>& f,
                               const Value& v) const {
    const std::vector<double> gn = num_grad(f);
    const std::vector<double> gd =
        denom_ == Denominator::kLocalEntropy ? local_grad(f) : dirichlet_grad(f);
    std::vector<double> g(f.size());
    for (std::size_t x = 0; x < f.size(); ++x) {
      const double df = gn[x] / v.num - gd[x] / v.den;
      g[x] = log_param() ? f[x] * df : df;
    }
    return g;
  }

 private:
  std::vector<double> num_grad(const std::vector<double>& f) const {
    const auto& m = mu_.probs();
    double mean = 0.0;
    for (std::size_t x = 0; x < f.size(); ++x) mean += m[x] * f[x];
    std::vector<double> g(f.size());
    for (std::size_t x = 0; x < f.size(); ++x) {
      g[x] = log_param() ? m[x] * std::log(f[x] / mean)
                         : 2.0 * m[x] * (f[x] - mean);
    }
    return g;
  }

  // d/df_x of sum over slices of mass * Ent_slice[f] (u log u only).
  std::vector<double> local_grad(const std::vector<double>& f) const {
    const StateSpace& space = mu_.space();
    const auto& m = mu_.probs();
    const std::size_t q = space.q();
    std::vector<double> g(f.size(), 0.0);
    for (std::size_t site = 0; site < space.n(); ++site) {
      const std::size_t stride = space.stride(site);
      for (std::size_t base = 0; base < f.size(); ++base) {
        if (space.symbol_at(base, site) != 0) continue;
        double mass = 0.0, avg = 0.0;
        for (std::size_t b = 0; b < q; ++b) {
          mass += m[base + b * stride];
          avg += m[base + b * stride] * f[base + b * stride];
        }
        if (!(mass > 0.0)) continue;
        for (std::size_t b = 0; b < q; ++b) {
          const std::size_t x = base + b * stride;
          if (log_param()) {
            g[x] += m[x] * std::log(f[x] * mass / avg);
          } else {
            g[x] += 2.0 * m[x] * (f[x] - avg / mass);
          }
        }
      }
    }
    return g;
  }

  std::vector<double> dirichlet_grad(const std::vector<double>& f) const {
    const StateSpace& space = mu_.space();
    const auto& m = mu_.probs();
    const std::size_t q = space.q();
    const double inv_n = 1.0 / static_cast<double>(space.n());
    std::vector<double> g(f.size(), 0.0);
    for (std::size_t site = 0; site < space.n(); ++site) {
      const std::size_t stride = space.stride(site);
      for (std::size_t base = 0; base < f.size(); ++base) {
        if (space.symbol_at(base, site) != 0) continue;
        for (std::size_t a = 0; a < q; ++a) {
          const std::size_t x = base + a * stride;
          for (std::size_t b = 0; b < q; ++b) {
            if (a == b) continue;
            const std::size_t y = base + b * stride;
            const double k = m[x] * P_->conditional(site, y) * inv_n;
            if (log_param()) {
              g[x] += 2.0 * k *
                      (std::log(f[x] / f[y]) + (f[x] - f[y]) / f[x]);
            } else {
              g[x] += 8.0 * k * (f[x] - f[y]);
            }
          }
        }
      }
    }
    return g;
  }

  const DenseDistribution& mu_;
  PhiFunctional phi_;
  Denominator denom_;
  std::optional<TransitionMatrix> P_;
};

struct AscentResult {
  double ratio = 0.0;
  std::vector<double> f;
  std::size_t iterations = 0;
  bool converged = false;
  bool unbounded = false;
};

AscentResult ascend(const RatioProblem& problem, std::vector<double> g,
                    const EstimatorOptions& options,
                    std::span<const double> mu) {
  AscentResult out;
  problem.normalize(g);
  std::vector<double> f = problem.to_f(g);
  if (problem.degenerate(f)) return out;
  auto v = problem.value(f);
  if (!(v.num > 0.0)) return out;  // constant start, no information
  if (!(v.den > 0.0)) {
    out.unbounded = true;
    out.ratio = std::numeric_limits<double>::infinity();
    out.f = std::move(f);
    return out;
  }
  double J = std::log(v.num) - std::log(v.den);
  double step = 0.5;
  std::vector<double> grad = problem.gradient(f, v);
  std::vector<double> trial(g.size());
  for (std::size_t it = 0; it < options.iters; ++it) {
    out.iterations = it + 1;
    double scale = 0.0;
    for (std::size_t x = 0; x < grad.size(); ++x) {
      grad[x] = mu[x] > 0.0 ? grad[x] / mu[x] : 0.0;
      scale = std::max(scale, std::abs(grad[x]));
    }
    if (!(scale > 0.0) || !std::isfinite(scale)) {
      out.converged = true;
      break;
    }
    bool moved = false;
    while (step > 1e-12) {
      for (std::size_t x = 0; x < g.size(); ++x) {
        trial[x] = g[x] + step * grad[x] / scale;
      }
      problem.normalize(trial);
      std::vector<double> tf = problem.to_f(trial);
      if (problem.degenerate(tf)) {
        step *= 0.5;
        continue;
      }
      const auto tv = problem.value(tf);
      if (tv.num > 0.0 && tv.den > 0.0) {
        const double tJ = std::log(tv.num) - std::log(tv.den);
        if (tJ > J) {
          const double gain = tJ - J;
          g.swap(trial);
          f = std::move(tf);
          v = tv;
          J = tJ;
          step *= 1.5;
          moved = true;
          if (gain < options.tol) out.converged = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!moved) out.converged = true;
    if (out.converged) break;
    grad = problem.gradient(f, v);
  }
  out.ratio = std::exp(J);
  out.f = std::move(f);
  return out;
}

FunctionalConstantEstimate point_mass_estimate(const DenseDistribution& mu) {
  FunctionalConstantEstimate est;
  est.flag = EstimateFlag::kPointMass;
  est.converged = true;
  est.witness = DensityFunction::constant(mu.size(), 1.0);
  return est;
}

FunctionalConstantEstimate run_estimator(const DenseDistribution& mu,
                                         const RatioProblem& problem,
                                         const EstimatorOptions& options) {
  FunctionalConstantEstimate est;
  const StateSpace& space = mu.space();
  std::vector<std::vector<double>> starts;
  for (const auto& w : options.warm_starts) {
    if (w.size() != mu.size()) {
      throw Error(ErrorCode::kDimensionMismatch, "warm start size");
    }
    starts.push_back(problem.from_f(w.values()));
  }
  // Functions of one coordinate: their ATE ratio is already >= 1.
  for (std::size_t j = 0; j < space.n(); ++j) {
    std::vector<double> g(mu.size());
    for (std::size_t x = 0; x < mu.size(); ++x) {
      g[x] = static_cast<double>(space.symbol_at(x, j)) /
             static_cast<double>(space.q() - 1);
    }
    starts.push_back(std::move(g));
  }
  Rng rng(options.seed);
  for (std::size_t r = 0; r < options.restarts; ++r) {
    const double amp = uniform_real(rng, 0.5, 3.0);
    std::vector<double> g(mu.size());
    for (double& v : g) v = amp * uniform_real(rng, -1.0, 1.0);
    starts.push_back(std::move(g));
  }

  bool found = false;
  for (auto& g : starts) {
    AscentResult r = ascend(problem, std::move(g), options, mu.probs());
    if (r.f.empty()) continue;
    if (!found || r.ratio > est.lower) {
      found = true;
      est.lower = r.ratio;
      est.witness = DensityFunction(std::move(r.f));
      est.iterations = r.iterations;
      est.converged = r.converged;
      est.flag = r.unbounded ? EstimateFlag::kUnbounded : EstimateFlag::kNone;
    }
    if (r.unbounded) break;
  }
  if (!found) est.witness = DensityFunction::constant(mu.size(), 1.0);
  return est;
}

}  // namespace

FunctionalConstantEstimate estimate_ate_constant(
    const DenseDistribution& mu, const EstimatorOptions& options) {
  if (mu.is_point_mass()) return point_mass_estimate(mu);
  const RatioProblem problem(mu, PhiFunctional::u_log_u(),
                             Denominator::kLocalEntropy);
  return run_estimator(mu, problem, options);
}

FunctionalConstantEstimate estimate_phi_sobolev_constant(
    const DenseDistribution& mu, PhiFunctional phi,
    const EstimatorOptions& options) {
  if (mu.is_point_mass()) return point_mass_estimate(mu);
  const RatioProblem problem(mu, phi, Denominator::kDirichlet);
  return run_estimator(mu, problem, options);
}

double ate_ratio(const DenseDistribution& mu, const DensityFunction& f) {
  return phi_entropy(mu, f) / local_entropy_functional(mu, f);
}

double phi_sobolev_ratio(const DenseDistribution& mu, const DensityFunction& f,
                         PhiFunctional phi) {
  const TransitionMatrix P(mu);
  return phi_entropy(mu, f, phi) / dirichlet_form_phi(P, f.values(), phi);
}

WeakSobolevCheck weak_phi_sobolev_check(const MixtureModel& model,
                                        const DensityFunction& f,
                                        double cstar, PhiFunctional phi) {
  const TransitionMatrix P(model.mixture());
  const ChainRuleParts parts = chain_rule_decompose(model, f, phi);
  WeakSobolevCheck check;
  check.lhs = parts.total;
  check.inter = parts.inter;
  check.rhs = cstar * dirichlet_form_phi(P, f.values(), phi) + parts.inter;
  check.holds = check.lhs <= check.rhs + 1e-9;
  return check;
}

}  // namespace mixate
