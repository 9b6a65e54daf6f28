#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mixate/distribution.hpp"
#include "mixate/entropy.hpp"
#include "mixate/random.hpp"

namespace mixate {

class MixtureModel;

// Heat-bath Glauber dynamics for mu: pick i uniformly, resample x_i from
// mu|x_{-i}. Stored per site as the conditional weight of each state in
// its slice, so P(x, x <-i b) = cond(i, x <-i b) / n.
class TransitionMatrix {
 public:
  // Throws UnsupportedSlice if some slice of mu has zero mass.
  explicit TransitionMatrix(const DenseDistribution& mu);

  const DenseDistribution& stationary() const noexcept { return mu_; }
  const StateSpace& space() const noexcept { return mu_.space(); }
  std::size_t size() const noexcept { return mu_.size(); }

  double entry(std::size_t x, std::size_t y) const;
  // mu(x <-i y_i | x_{-i}) for y in the site-i slice of x.
  double conditional(std::size_t site, std::size_t y) const {
    return cond_[site * size() + y];
  }

  // out = v P (evolves a distribution one step).
  void apply_left(std::span<const double> v, std::span<double> out) const;
  // out = P f (conditional expectation one step).
  void apply_right(std::span<const double> f, std::span<double> out) const;

  // Row-major dense copy; refuses more than 4096 states.
  std::vector<double> dense() const;

 private:
  DenseDistribution mu_;
  std::vector<double> cond_;
};

// Exact conditional sampler over a dense table.
struct SliceSampler {
  const DenseDistribution* mu;
  Symbol operator()(const Config& x, std::size_t site, Rng& rng) const;
};

// One discrete Glauber update. sample_symbol(x, i, rng) must return a
// draw from the conditional law at (x, i).
template <typename SymbolSampler>
Config glauber_step(const Config& state, SymbolSampler&& sample_symbol,
                    Rng& rng) {
  const std::size_t site = uniform_index(rng, state.size());
  return state.with(site, sample_symbol(state, site, rng));
}

// Glauber chain that can be restarted at any state and that reports which
// site each update resampled. Backs the simulated Coordinate Oracle.
class GlauberDynamics {
 public:
  explicit GlauberDynamics(const DenseDistribution& mu);

  struct Update {
    std::size_t site = 0;
    Symbol symbol = 0;
  };

  void reset(std::size_t index) { state_ = index; }
  std::size_t state() const noexcept { return state_; }
  Update step(Rng& rng);

  // The two halves of step(): which site is touched, then its new value.
  std::size_t propose_site(Rng& rng) const;
  Symbol resample(std::size_t site, Rng& rng);

 private:
  const DenseDistribution* mu_;
  std::size_t state_ = 0;
  std::vector<double> scratch_;
};

// Distribution of the continuous-time chain (generator P - I) at time t
// started from pi. Uniformized series with tail below 1e-13 per chunk.
std::vector<double> evolve(const TransitionMatrix& P,
                           std::span<const double> pi, double t);
DenseDistribution evolve_continuous(const DenseDistribution& pi,
                                    const DenseDistribution& mu, double t);

struct EvolutionCurve {
  std::vector<double> times;
  std::vector<double> kl_nats;
  std::vector<std::vector<double>> snapshots;  // empty unless requested

  std::string to_csv() const;
};

// KL(P_t pi || mu) on a nondecreasing grid, stepping between grid points.
EvolutionCurve evolution_curve(const TransitionMatrix& P,
                               std::span<const double> pi,
                               std::span<const double> grid,
                               bool keep_snapshots = false);

// E_{x~mu} E_{y~P(x,.)}[(f(x)-f(y))(g(x)-g(y))]. Pairs with f(x) = f(y)
// contribute 0 even when g is infinite there.
double dirichlet_form(const TransitionMatrix& P, std::span<const double> f,
                      std::span<const double> g);
double dirichlet_form(const TransitionMatrix& P, const DensityFunction& f,
                      const DensityFunction& g);
// E_P(f, Phi'(f)).
double dirichlet_form_phi(const TransitionMatrix& P, std::span<const double> f,
                          PhiFunctional phi);

// For q = 2: (1/n) sum over ordered neighbour pairs of
//   E_a[mu_a(x)mu_a(y)/(mu_a(x)+mu_a(y))] (f(x)-f(y))(Phi'(f(x))-Phi'(f(y))).
// Never exceeds E_P(f, Phi'(f)) for the mixture's P.
double edge_form_lower_bound(const MixtureModel& model,
                             std::span<const double> f, PhiFunctional phi);

struct DerivativeCheck {
  double lhs = 0.0;  // finite difference of t -> KL(P_t pi || mu)
  double rhs = 0.0;  // -(1/2) E_P(f_t, log f_t), f_t = P_t pi / mu
  double literal_rhs = 0.0;  // -E_P(f_t, log f_t)

  bool matches() const;
};

// dt <= 0 selects 1e-5 * n.
DerivativeCheck entropy_decay_derivative_check(const DenseDistribution& pi,
                                               const DenseDistribution& mu,
                                               double t, double dt = 0.0);

}  // namespace mixate
