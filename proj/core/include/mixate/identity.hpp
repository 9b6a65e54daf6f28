#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "mixate/mixture.hpp"
#include "mixate/oracle.hpp"
#include "mixate/testers.hpp"

namespace mixate {

struct AlgorithmParams {
  double eps = 0.0;
  double cstar = 1.0;  // upper bound on the components' ATE constants
  double eta = 0.0;    // balance of the mixture
  std::size_t n = 0;
  std::size_t q = 0;
  std::uint64_t T1 = 0;  // number of (x, i) pairs in step one
  std::uint64_t T = 0;   // coordinate-call budget
  std::uint64_t seed = 0;

  // Computes eta, T1 and T for the model. Throws InvalidSetup when the
  // mixture is not fully balanced, eps or cstar is out of range, or
  // eps > n ln(1/eta).
  static AlgorithmParams make(const MixtureModel& model, double eps,
                              double cstar, std::uint64_t seed);

  double theta_low() const;   // 0.05 eps / (cstar n)
  double theta_high() const;  // ln(1/eta)
  double step_one_delta() const { return 0.05 / static_cast<double>(T1); }

  nlohmann::json to_json() const;
};

// E[1/theta] for theta uniform on [theta_low, theta_high], closed form.
double expected_inverse_theta(const AlgorithmParams& params);

struct PairRecord {
  std::size_t index = 0;  // encoded x
  std::size_t site = 0;
  double theta = 0.0;
  Verdict verdict = Verdict::kAccept;
  std::uint64_t coordinate_calls = 0;
};

struct StepOneRecord {
  std::vector<PairRecord> pairs;  // pairs actually tested, in order
  std::size_t rejections = 0;
  std::uint64_t coordinate_calls = 0;
  bool budget_tripped = false;
  bool unsupported_slice = false;
};

struct StepOneResult {
  Verdict verdict = Verdict::kAccept;
  StepOneRecord record;
};

struct StepTwoResult {
  Verdict verdict = Verdict::kAccept;
  std::uint64_t samples = 0;
  bool unsupported_point = false;
};

// Draws all T1 pairs first, then runs a KL sub-test per pair against the
// mixture's conditional. Stops at the first rejection or budget trip.
StepOneResult step_one_local(const MixtureModel& model, OracleHandle& oracle,
                             const AlgorithmParams& params, Rng& rng);

// KL-tests rho_pi against rho at 0.5 eps with failure probability 0.1.
StepTwoResult step_two_weights(const MixtureModel& model,
                               OracleHandle& oracle,
                               const AlgorithmParams& params, Rng& rng);

struct TestReport {
  Verdict verdict = Verdict::kAccept;
  StepOneRecord step1;
  bool step2_ran = false;
  StepTwoResult step2;
  std::uint64_t T1 = 0;
  std::uint64_t budget = 0;
  std::uint64_t general_calls = 0;
  std::uint64_t coordinate_calls = 0;

  nlohmann::json to_json() const;
};

TestReport product_set_kl_test(const MixtureModel& model, OracleHandle& oracle,
                               const AlgorithmParams& params);

struct AmplifiedReport {
  Verdict verdict = Verdict::kAccept;
  std::size_t runs = 0;
  std::size_t rejections = 0;
};

// Majority over 2r+1 independent runs, r = repetitions(delta). Each run
// gets its own handle over the same hidden law and its own seed.
AmplifiedReport amplified_product_set_kl_test(const MixtureModel& model,
                                              const OracleHandle& prototype,
                                              const AlgorithmParams& params,
                                              double delta);

}  // namespace mixate
