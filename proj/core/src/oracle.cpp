#include "mixate/oracle.hpp"

#include <string>

#include "mixate/error.hpp"

namespace mixate {

void Budget::charge(std::uint64_t calls) {
  if (!can_afford(calls)) {
    throw Error(ErrorCode::kBudgetExhausted,
                "coordinate budget of " + std::to_string(limit_) +
                    " calls exhausted");
  }
  consumed_ += calls;
}

nlohmann::json OracleCounters::to_json() const {
  return {{"general_calls", general_calls},
          {"coordinate_calls", coordinate_calls}};
}

OracleHandle::OracleHandle(DenseDistribution hidden, std::uint64_t seed,
                           OracleBackend backend)
    : hidden_(std::make_shared<const DenseDistribution>(std::move(hidden))),
      backend_(backend),
      rng_(seed),
      dynamics_(std::make_unique<GlauberDynamics>(*hidden_)),
      scratch_(hidden_->space().q()) {}

OracleHandle::OracleHandle(const OracleHandle& other, std::uint64_t seed)
    : hidden_(other.hidden_),
      backend_(other.backend_),
      rng_(seed),
      dynamics_(std::make_unique<GlauberDynamics>(*hidden_)),
      scratch_(hidden_->space().q()) {}

std::size_t OracleHandle::general_sample_index() {
  ++counters_.general_calls;
  return hidden_->sample_index(rng_);
}

Symbol OracleHandle::coordinate_sample_index(std::size_t index,
                                             std::size_t site,
                                             Budget* budget) {
  const StateSpace& sp = space();
  if (index >= sp.size() || site >= sp.n()) {
    throw Error(ErrorCode::kInvalidConfig, "query outside the state space");
  }
  if (budget != nullptr) budget->charge();
  ++counters_.coordinate_calls;

  if (backend_ == OracleBackend::kExactSlice) {
    const double mass =
        slice_weights(hidden_->probs(), sp, index, site, scratch_);
    if (!(mass > 0.0)) {
      throw Error(ErrorCode::kUnsupportedSlice,
                  "hidden law has a zero-mass slice at site " +
                      std::to_string(site));
    }
    return static_cast<Symbol>(sample_weighted(scratch_, rng_));
  }

  const std::size_t cap = 100 * sp.n();
  for (std::size_t attempt = 0; attempt < cap; ++attempt) {
    dynamics_->reset(index);
    ++attempts_;
    const std::size_t touched = dynamics_->propose_site(rng_);
    if (touched != site) continue;  // discard and restart at x
    return dynamics_->resample(touched, rng_);
  }
  throw Error(ErrorCode::kOracleTimeout,
              "no update at site " + std::to_string(site) + " in " +
                  std::to_string(cap) + " attempts");
}

Symbol OracleHandle::coordinate_sample(const Config& x, std::size_t site,
                                       Budget* budget) {
  return coordinate_sample_index(space().encode(x), site, budget);
}

RestrictedPairSet RestrictedPairSet::draw(OracleHandle& oracle,
                                          std::size_t count, Rng& rng) {
  RestrictedPairSet set;
  set.pairs_.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t x = oracle.general_sample_index();
    const std::size_t i = uniform_index(rng, oracle.space().n());
    set.pairs_.push_back({x, i});
  }
  return set;
}

Symbol RestrictedCoordinateOracle::sample(std::size_t pair, Budget* budget) {
  if (pair >= pairs_->size()) {
    throw Error(ErrorCode::kInvalidParameter, "pair index out of range");
  }
  const auto& p = (*pairs_)[pair];
  return oracle_->coordinate_sample_index(p.index, p.site, budget);
}

}  // namespace mixate
