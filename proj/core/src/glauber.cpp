#include "mixate/glauber.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mixate/divergence.hpp"
#include "mixate/error.hpp"
#include "mixate/mixture.hpp"
#include "mixate/serialize.hpp"

namespace mixate {

namespace {

constexpr double kSeriesTail = 1e-13;
// Poisson weights start at e^{-s}; keep s well away from underflow.
constexpr double kMaxChunk = 64.0;

}  // namespace

TransitionMatrix::TransitionMatrix(const DenseDistribution& mu)
    : mu_(mu), cond_(mu.space().n() * mu.size(), 0.0) {
  const StateSpace& space = mu_.space();
  const std::size_t q = space.q();
  const std::size_t N = size();
  for (std::size_t site = 0; site < space.n(); ++site) {
    const std::size_t stride = space.stride(site);
    for (std::size_t x = 0; x < N; ++x) {
      if (space.symbol_at(x, site) != 0) continue;
      double mass = 0.0;
      for (std::size_t b = 0; b < q; ++b) mass += mu_[x + b * stride];
      if (!(mass > 0.0)) {
        throw Error(ErrorCode::kUnsupportedSlice,
                    "slice at site " + std::to_string(site) +
                        " through index " + std::to_string(x) +
                        " has zero mass");
      }
      for (std::size_t b = 0; b < q; ++b) {
        cond_[site * N + x + b * stride] = mu_[x + b * stride] / mass;
      }
    }
  }
}

double TransitionMatrix::entry(std::size_t x, std::size_t y) const {
  const StateSpace& space = mu_.space();
  const double inv_n = 1.0 / static_cast<double>(space.n());
  if (x == y) {
    double diag = 0.0;
    for (std::size_t i = 0; i < space.n(); ++i) diag += conditional(i, x);
    return diag * inv_n;
  }
  if (space.hamming(x, y) != 1) return 0.0;
  for (std::size_t i = 0; i < space.n(); ++i) {
    if (space.symbol_at(x, i) != space.symbol_at(y, i)) {
      return conditional(i, y) * inv_n;
    }
  }
  return 0.0;
}

void TransitionMatrix::apply_left(std::span<const double> v,
                                  std::span<double> out) const {
  const StateSpace& space = mu_.space();
  const std::size_t q = space.q();
  const std::size_t N = size();
  const double inv_n = 1.0 / static_cast<double>(space.n());
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t site = 0; site < space.n(); ++site) {
    const std::size_t stride = space.stride(site);
    const double* c = cond_.data() + site * N;
    for (std::size_t x = 0; x < N; ++x) {
      if (space.symbol_at(x, site) != 0) continue;
      double mass = 0.0;
      for (std::size_t b = 0; b < q; ++b) mass += v[x + b * stride];
      mass *= inv_n;
      for (std::size_t b = 0; b < q; ++b) {
        out[x + b * stride] += mass * c[x + b * stride];
      }
    }
  }
}

void TransitionMatrix::apply_right(std::span<const double> f,
                                   std::span<double> out) const {
  const StateSpace& space = mu_.space();
  const std::size_t q = space.q();
  const std::size_t N = size();
  const double inv_n = 1.0 / static_cast<double>(space.n());
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t site = 0; site < space.n(); ++site) {
    const std::size_t stride = space.stride(site);
    const double* c = cond_.data() + site * N;
    for (std::size_t x = 0; x < N; ++x) {
      if (space.symbol_at(x, site) != 0) continue;
      double avg = 0.0;
      for (std::size_t b = 0; b < q; ++b) {
        avg += c[x + b * stride] * f[x + b * stride];
      }
      avg *= inv_n;
      for (std::size_t b = 0; b < q; ++b) out[x + b * stride] += avg;
    }
  }
}

std::vector<double> TransitionMatrix::dense() const {
  const std::size_t N = size();
  if (N > 4096) {
    throw Error(ErrorCode::kStateSpaceTooLarge,
                "dense transition matrix limited to 4096 states");
  }
  std::vector<double> m(N * N, 0.0);
  for (std::size_t x = 0; x < N; ++x) {
    for (std::size_t y = 0; y < N; ++y) m[x * N + y] = entry(x, y);
  }
  return m;
}

Symbol SliceSampler::operator()(const Config& x, std::size_t site,
                                Rng& rng) const {
  const StateSpace& space = mu->space();
  std::vector<double> w(space.q());
  const double mass =
      slice_weights(mu->probs(), space, space.encode(x), site, w);
  if (!(mass > 0.0)) {
    throw Error(ErrorCode::kUnsupportedSlice,
                "zero-mass slice at site " + std::to_string(site));
  }
  return static_cast<Symbol>(sample_weighted(w, rng));
}

GlauberDynamics::GlauberDynamics(const DenseDistribution& mu)
    : mu_(&mu), scratch_(mu.space().q()) {}

std::size_t GlauberDynamics::propose_site(Rng& rng) const {
  return uniform_index(rng, mu_->space().n());
}

Symbol GlauberDynamics::resample(std::size_t site, Rng& rng) {
  const StateSpace& space = mu_->space();
  const double mass =
      slice_weights(mu_->probs(), space, state_, site, scratch_);
  if (!(mass > 0.0)) {
    throw Error(ErrorCode::kUnsupportedSlice,
                "zero-mass slice at site " + std::to_string(site));
  }
  const auto symbol = static_cast<Symbol>(sample_weighted(scratch_, rng));
  state_ = space.with_symbol(state_, site, symbol);
  return symbol;
}

GlauberDynamics::Update GlauberDynamics::step(Rng& rng) {
  const std::size_t site = propose_site(rng);
  return {site, resample(site, rng)};
}

namespace {

// e^{s(P-I)} applied to v in place, for s <= kMaxChunk.
void evolve_chunk(const TransitionMatrix& P, std::vector<double>& v,
                  double s, std::vector<double>& term,
                  std::vector<double>& next) {
  const std::size_t N = v.size();
  term = v;
  double weight = std::exp(-s);
  for (std::size_t x = 0; x < N; ++x) v[x] = weight * term[x];
  for (std::size_t j = 1;; ++j) {
    P.apply_left(term, next);
    term.swap(next);
    weight *= s / static_cast<double>(j);
    for (std::size_t x = 0; x < N; ++x) v[x] += weight * term[x];
    // Poisson tail beyond j is below w_{j+1} / (1 - s/(j+2)) once j+1 > s.
    const double jn = static_cast<double>(j);
    if (jn + 1.0 > s) {
      const double w_next = weight * s / (jn + 1.0);
      if (w_next * (jn + 2.0) / (jn + 2.0 - s) < kSeriesTail) break;
    }
  }
}

}  // namespace

std::vector<double> evolve(const TransitionMatrix& P,
                           std::span<const double> pi, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw Error(ErrorCode::kInvalidTime, "time must be finite and >= 0");
  }
  if (pi.size() != P.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "initial law size");
  }
  std::vector<double> v(pi.begin(), pi.end());
  if (t == 0.0) return v;
  std::vector<double> term, next(v.size());
  const auto chunks = static_cast<std::size_t>(std::ceil(t / kMaxChunk));
  const double s = t / static_cast<double>(chunks);
  for (std::size_t c = 0; c < chunks; ++c) evolve_chunk(P, v, s, term, next);
  double total = 0.0;
  for (double& p : v) {
    p = std::max(p, 0.0);
    total += p;
  }
  for (double& p : v) p /= total;
  return v;
}

DenseDistribution evolve_continuous(const DenseDistribution& pi,
                                    const DenseDistribution& mu, double t) {
  if (!(pi.space() == mu.space())) {
    throw Error(ErrorCode::kDimensionMismatch, "state spaces differ");
  }
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw Error(ErrorCode::kInvalidTime, "time must be finite and >= 0");
  }
  if (t == 0.0) return pi;
  const TransitionMatrix P(mu);
  return DenseDistribution::from_weights(pi.space(), evolve(P, pi.probs(), t));
}

std::string EvolutionCurve::to_csv() const {
  std::string out = "t,kl_nats\n";
  for (std::size_t i = 0; i < times.size(); ++i) {
    out += format_double(times[i]);
    out += ',';
    out += format_double(kl_nats[i]);
    out += '\n';
  }
  return out;
}

EvolutionCurve evolution_curve(const TransitionMatrix& P,
                               std::span<const double> pi,
                               std::span<const double> grid,
                               bool keep_snapshots) {
  EvolutionCurve curve;
  std::vector<double> v(pi.begin(), pi.end());
  double now = 0.0;
  for (double t : grid) {
    if (!(t >= now)) {
      throw Error(ErrorCode::kInvalidTime,
                  "time grid must be nonnegative and nondecreasing");
    }
    if (t > now) v = evolve(P, v, t - now);
    now = t;
    curve.times.push_back(t);
    curve.kl_nats.push_back(kl(v, P.stationary().probs()));
    if (keep_snapshots) curve.snapshots.push_back(v);
  }
  return curve;
}

double dirichlet_form(const TransitionMatrix& P, std::span<const double> f,
                      std::span<const double> g) {
  const StateSpace& space = P.space();
  const std::size_t q = space.q();
  const std::size_t N = P.size();
  if (f.size() != N || g.size() != N) {
    throw Error(ErrorCode::kDimensionMismatch, "function size");
  }
  const DenseDistribution& mu = P.stationary();
  double sum = 0.0;
  for (std::size_t site = 0; site < space.n(); ++site) {
    const std::size_t stride = space.stride(site);
    for (std::size_t base = 0; base < N; ++base) {
      if (space.symbol_at(base, site) != 0) continue;
      for (std::size_t a = 0; a < q; ++a) {
        const std::size_t x = base + a * stride;
        if (mu[x] == 0.0) continue;
        for (std::size_t b = 0; b < q; ++b) {
          if (a == b) continue;
          const std::size_t y = x - a * stride + b * stride;
          if (f[x] == f[y]) continue;
          const double c = P.conditional(site, y);
          if (c == 0.0) continue;
          sum += mu[x] * c * (f[x] - f[y]) * (g[x] - g[y]);
        }
      }
    }
  }
  return sum / static_cast<double>(space.n());
}

double dirichlet_form(const TransitionMatrix& P, const DensityFunction& f,
                      const DensityFunction& g) {
  return dirichlet_form(P, f.values(), g.values());
}

double dirichlet_form_phi(const TransitionMatrix& P, std::span<const double> f,
                          PhiFunctional phi) {
  std::vector<double> g(f.size());
  for (std::size_t x = 0; x < f.size(); ++x) g[x] = phi.derivative(f[x]);
  return dirichlet_form(P, f, g);
}

double edge_form_lower_bound(const MixtureModel& model,
                             std::span<const double> f, PhiFunctional phi) {
  const StateSpace& space = model.space();
  if (space.q() != 2) {
    throw Error(ErrorCode::kInvalidParameter,
                "edge form is defined for binary alphabets");
  }
  double sum = 0.0;
  for (std::size_t x = 0; x < space.size(); ++x) {
    for (std::size_t i = 0; i < space.n(); ++i) {
      const std::size_t y = space.with_symbol(x, i, 1 - space.symbol_at(x, i));
      if (f[x] == f[y]) continue;
      double w = 0.0;
      for (std::size_t a = 0; a < model.k(); ++a) {
        const double mx = model.component(a)[x];
        const double my = model.component(a)[y];
        if (mx + my > 0.0) w += model.weights()[a] * mx * my / (mx + my);
      }
      if (w == 0.0) continue;
      sum += w * (f[x] - f[y]) *
             (phi.derivative(f[x]) - phi.derivative(f[y]));
    }
  }
  return sum / static_cast<double>(space.n());
}

bool DerivativeCheck::matches() const {
  return std::abs(lhs - rhs) <= std::max(1e-6, 1e-4 * std::abs(rhs));
}

DerivativeCheck entropy_decay_derivative_check(const DenseDistribution& pi,
                                               const DenseDistribution& mu,
                                               double t, double dt) {
  if (!(t >= 0.0)) {
    throw Error(ErrorCode::kInvalidTime, "time must be >= 0");
  }
  if (t == 0.0 && std::isinf(kl_divergence(pi, mu))) {
    throw Error(ErrorCode::kDerivativeUndefined,
                "KL is infinite at t = 0");
  }
  if (!(dt > 0.0)) dt = 1e-5 * static_cast<double>(mu.space().n());
  const TransitionMatrix P(mu);
  const auto& m = mu.probs();

  DerivativeCheck check;
  std::vector<double> p_t;
  if (t >= dt) {
    const std::vector<double> lo = evolve(P, pi.probs(), t - dt);
    p_t = evolve(P, lo, dt);
    const std::vector<double> hi = evolve(P, p_t, dt);
    check.lhs = (kl(hi, m) - kl(lo, m)) / (2.0 * dt);
  } else {
    // Second-order one-sided difference.
    p_t = evolve(P, pi.probs(), t);
    const std::vector<double> h1 = evolve(P, p_t, dt);
    const std::vector<double> h2 = evolve(P, h1, dt);
    check.lhs = (-3.0 * kl(p_t, m) + 4.0 * kl(h1, m) - kl(h2, m)) / (2.0 * dt);
  }
  std::vector<double> f(p_t.size()), logf(p_t.size());
  for (std::size_t x = 0; x < f.size(); ++x) {
    f[x] = p_t[x] / m[x];
    logf[x] = f[x] > 0.0 ? std::log(f[x])
                         : -std::numeric_limits<double>::infinity();
  }
  const double form = dirichlet_form(P, f, logf);
  check.literal_rhs = -form;
  check.rhs = -0.5 * form;
  return check;
}

}  // namespace mixate
