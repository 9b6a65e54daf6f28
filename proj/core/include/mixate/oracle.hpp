#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include <nlohmann/json.hpp>

#include "mixate/distribution.hpp"
#include "mixate/glauber.hpp"
#include "mixate/random.hpp"

namespace mixate {

// Cap on coordinate-oracle calls. charge() throws BudgetExhausted rather
// than letting consumed pass limit.
class Budget {
 public:
  explicit Budget(std::uint64_t limit) : limit_(limit) {}

  std::uint64_t limit() const noexcept { return limit_; }
  std::uint64_t consumed() const noexcept { return consumed_; }
  std::uint64_t remaining() const noexcept { return limit_ - consumed_; }
  bool can_afford(std::uint64_t calls) const noexcept {
    return calls <= remaining();
  }
  void charge(std::uint64_t calls = 1);

 private:
  std::uint64_t limit_;
  std::uint64_t consumed_ = 0;
};

struct OracleCounters {
  std::uint64_t general_calls = 0;
  std::uint64_t coordinate_calls = 0;

  nlohmann::json to_json() const;
};

enum class OracleBackend {
  kExactSlice,  // conditional law read off the hidden table
  kGlauber,     // restart Glauber dynamics at x until site i is resampled
};

// Sample access to a hidden distribution. Nothing here returns the table
// or any function of it besides samples and call counters.
class OracleHandle {
 public:
  OracleHandle(DenseDistribution hidden, std::uint64_t seed,
               OracleBackend backend = OracleBackend::kExactSlice);
  // Shares the sealed table with another handle; own rng and counters.
  OracleHandle(const OracleHandle& other, std::uint64_t seed);

  const StateSpace& space() const noexcept { return hidden_->space(); }
  OracleBackend backend() const noexcept { return backend_; }
  // The Glauber backend relies on seeing which site each update touched,
  // including updates that leave the state unchanged.
  bool reports_site_updates() const noexcept {
    return backend_ == OracleBackend::kGlauber;
  }

  std::size_t general_sample_index();
  Config general_sample() { return space().decode(general_sample_index()); }

  // Draw from pi|x_{-i}. Charges the budget first when one is given.
  // Throws UnsupportedSlice on a zero-mass slice and, for the Glauber
  // backend, OracleTimeout after 100 n attempts.
  Symbol coordinate_sample_index(std::size_t index, std::size_t site,
                                 Budget* budget = nullptr);
  Symbol coordinate_sample(const Config& x, std::size_t site,
                           Budget* budget = nullptr);

  const OracleCounters& counters() const noexcept { return counters_; }
  // Glauber updates run by the simulated backend (0 for exact slices).
  std::uint64_t glauber_attempts() const noexcept { return attempts_; }

 private:
  std::shared_ptr<const DenseDistribution> hidden_;
  OracleBackend backend_;
  Rng rng_;
  OracleCounters counters_;
  std::uint64_t attempts_ = 0;
  std::unique_ptr<GlauberDynamics> dynamics_;
  std::vector<double> scratch_;
};

// (x, i) pairs fixed before any conditional query is made: x from the
// General Oracle, i uniform.
class RestrictedPairSet {
 public:
  struct Pair {
    std::size_t index = 0;
    std::size_t site = 0;
  };

  static RestrictedPairSet draw(OracleHandle& oracle, std::size_t count,
                                Rng& rng);

  std::size_t size() const noexcept { return pairs_.size(); }
  const Pair& operator[](std::size_t k) const { return pairs_[k]; }
  const std::vector<Pair>& pairs() const noexcept { return pairs_; }

 private:
  std::vector<Pair> pairs_;
};

// Coordinate access limited to a RestrictedPairSet.
class RestrictedCoordinateOracle {
 public:
  RestrictedCoordinateOracle(OracleHandle& oracle,
                             const RestrictedPairSet& pairs)
      : oracle_(&oracle), pairs_(&pairs) {}

  Symbol sample(std::size_t pair, Budget* budget = nullptr);

 private:
  OracleHandle* oracle_;
  const RestrictedPairSet* pairs_;
};

}  // namespace mixate
