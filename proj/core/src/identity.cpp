#include "mixate/identity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mixate/error.hpp"

namespace mixate {

AlgorithmParams AlgorithmParams::make(const MixtureModel& model, double eps,
                                      double cstar, std::uint64_t seed) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw Error(ErrorCode::kInvalidSetup, "eps must be positive");
  }
  if (!(cstar > 0.0) || !std::isfinite(cstar)) {
    throw Error(ErrorCode::kInvalidSetup, "cstar must be positive");
  }
  const BalanceResult b = balance(model.mixture());
  if (!b.fully_supported || !(b.eta > 0.0)) {
    throw Error(ErrorCode::kInvalidSetup,
                "mixture has an unsupported conditional slice");
  }
  AlgorithmParams p;
  p.eps = eps;
  p.cstar = cstar;
  p.eta = b.eta;
  p.n = model.space().n();
  p.q = model.space().q();
  p.seed = seed;
  const double n = static_cast<double>(p.n);
  const double log_inv_eta = -std::log(p.eta);
  if (eps > n * log_inv_eta) {
    throw Error(ErrorCode::kInvalidSetup,
                "eps exceeds n ln(1/eta) = " + std::to_string(n * log_inv_eta));
  }
  const double t1 = std::ceil(std::log(25.0) * cstar * n / (0.45 * eps));
  p.T1 = static_cast<std::uint64_t>(t1);
  const double low = p.theta_low();
  if (!(low < log_inv_eta)) {
    throw Error(ErrorCode::kInvalidSetup, "empty threshold interval");
  }
  const double T = 100.0 * t1 * c_kl_test() *
                   std::sqrt(static_cast<double>(p.q)) * log_inv_eta *
                   std::log(20.0 * t1) * 10.0 * std::log(log_inv_eta / low);
  p.T = static_cast<std::uint64_t>(std::ceil(T));
  return p;
}

double AlgorithmParams::theta_low() const {
  return 0.05 * eps / (cstar * static_cast<double>(n));
}

double AlgorithmParams::theta_high() const { return -std::log(eta); }

nlohmann::json AlgorithmParams::to_json() const {
  return {{"eps", eps}, {"cstar", cstar}, {"eta", eta}, {"n", n},
          {"q", q},     {"T1", T1},       {"T", T},     {"seed", seed}};
}

double expected_inverse_theta(const AlgorithmParams& params) {
  const double lo = params.theta_low();
  const double hi = params.theta_high();
  return std::log(hi / lo) / (hi - lo);
}

StepOneResult step_one_local(const MixtureModel& model, OracleHandle& oracle,
                             const AlgorithmParams& params, Rng& rng) {
  StepOneResult out;
  const StateSpace& space = model.space();
  const RestrictedPairSet pairs =
      RestrictedPairSet::draw(oracle, params.T1, rng);
  RestrictedCoordinateOracle coord(oracle, pairs);
  Budget budget(params.T);
  std::vector<double> law(space.q());
  const double delta = params.step_one_delta();

  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& pair = pairs[k];
    PairRecord rec{pair.index, pair.site, 0.0, Verdict::kAccept, 0};
    rec.theta =
        uniform_real(rng, params.theta_low(), params.theta_high());
    conditional_law(model.mixture(), pair.index, pair.site, law);
    const double eta_q = *std::min_element(law.begin(), law.end());
    const std::uint64_t need =
        kl_test_sample_count(law.size(), eta_q, rec.theta, delta);
    if (!budget.can_afford(need)) {
      out.record.budget_tripped = true;
      rec.verdict = Verdict::kReject;
      out.record.pairs.push_back(rec);
      ++out.record.rejections;
      break;
    }
    const std::uint64_t before = budget.consumed();
    try {
      const TestVerdict v = kl_test(
          [&] { return static_cast<std::size_t>(coord.sample(k, &budget)); },
          law, rec.theta, delta);
      rec.verdict = v.verdict;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kUnsupportedSlice) {
        out.record.unsupported_slice = true;
      } else if (e.code() == ErrorCode::kBudgetExhausted) {
        out.record.budget_tripped = true;
      } else {
        throw;
      }
      rec.verdict = Verdict::kReject;
    }
    rec.coordinate_calls = budget.consumed() - before;
    out.record.coordinate_calls = budget.consumed();
    out.record.pairs.push_back(rec);
    if (rec.verdict == Verdict::kReject) {
      ++out.record.rejections;
      break;
    }
  }
  out.record.coordinate_calls = budget.consumed();
  out.verdict = out.record.rejections > 0 ? Verdict::kReject : Verdict::kAccept;
  return out;
}

StepTwoResult step_two_weights(const MixtureModel& model,
                               OracleHandle& oracle,
                               const AlgorithmParams& params, Rng& rng) {
  StepTwoResult out;
  if (model.k() == 1) return out;  // rho_pi = rho trivially
  std::vector<double> post(model.k());
  try {
    const TestVerdict v = kl_test(
        [&] {
          posterior_at(model, oracle.general_sample_index(), post);
          return sample_weighted(post, rng);
        },
        model.weights(), 0.5 * params.eps, 0.1);
    out.verdict = v.verdict;
    out.samples = v.samples_used;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kUnsupportedPoint) throw;
    out.unsupported_point = true;
    out.verdict = Verdict::kReject;
  }
  return out;
}

nlohmann::json TestReport::to_json() const {
  nlohmann::json j;
  j["verdict"] = std::string(to_string(verdict));
  j["step1"] = {{"pairs", T1},
                {"rejections", step1.rejections},
                {"coordinate_calls", step1.coordinate_calls},
                {"budget", budget},
                {"budget_tripped", step1.budget_tripped}};
  j["step2"] = {
      {"verdict", step2_ran ? std::string(to_string(step2.verdict))
                            : std::string("skipped")},
      {"samples", step2.samples}};
  j["general_calls"] = general_calls;
  return j;
}

TestReport product_set_kl_test(const MixtureModel& model, OracleHandle& oracle,
                               const AlgorithmParams& params) {
  if (!(oracle.space() == model.space())) {
    throw Error(ErrorCode::kInvalidSetup,
                "oracle and model live on different state spaces");
  }
  if (params.n != model.space().n() || params.q != model.space().q()) {
    throw Error(ErrorCode::kInvalidSetup, "params were made for another model");
  }
  TestReport report;
  report.T1 = params.T1;
  report.budget = params.T;
  const OracleCounters start = oracle.counters();
  Rng rng(params.seed);

  StepOneResult one = step_one_local(model, oracle, params, rng);
  report.step1 = std::move(one.record);
  if (one.verdict == Verdict::kAccept) {
    report.step2_ran = true;
    report.step2 = step_two_weights(model, oracle, params, rng);
    report.verdict = report.step2.verdict;
  } else {
    report.verdict = Verdict::kReject;
  }
  report.general_calls = oracle.counters().general_calls - start.general_calls;
  report.coordinate_calls =
      oracle.counters().coordinate_calls - start.coordinate_calls;
  return report;
}

AmplifiedReport amplified_product_set_kl_test(const MixtureModel& model,
                                              const OracleHandle& prototype,
                                              const AlgorithmParams& params,
                                              double delta) {
  AmplifiedReport out;
  out.runs = 2 * repetitions(delta) + 1;
  for (std::size_t r = 0; r < out.runs; ++r) {
    OracleHandle oracle(prototype, derive_seed(params.seed, 2 * r + 1));
    AlgorithmParams run = params;
    run.seed = derive_seed(params.seed, 2 * r);
    if (product_set_kl_test(model, oracle, run).verdict == Verdict::kReject) {
      ++out.rejections;
    }
  }
  out.verdict =
      2 * out.rejections > out.runs ? Verdict::kReject : Verdict::kAccept;
  return out;
}

}  // namespace mixate
