#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "cli.hpp"
#include "mixate/distribution.hpp"
#include "mixate/divergence.hpp"
#include "mixate/entropy.hpp"
#include "mixate/error.hpp"
#include "mixate/experiments.hpp"
#include "mixate/functional_constants.hpp"
#include "mixate/glauber.hpp"
#include "mixate/identity.hpp"
#include "mixate/mixture.hpp"
#include "mixate/oracle.hpp"
#include "mixate/random.hpp"
#include "mixate/serialize.hpp"
#include "svg.hpp"

namespace mixate::cli {

using nlohmann::json;
namespace fs = std::filesystem;

nlohmann::json RunConfig::to_json() const {
  json j = {{"command", command}, {"seed", seed}, {"jobs", jobs},
            {"params", params}, {"base_dir", base_dir.generic_string()}};
  if (!derived.is_null()) j["derived"] = derived;
  return j;
}

std::uint64_t resolve_seed(const json& params, const std::string* flag_seed) {
  auto parse = [](const std::string& text, const char* source) {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size()) {
      throw Error(ErrorCode::kInvalidParameter,
                  std::string("bad seed in ") + source + ": " + text);
    }
    return v;
  };
  if (flag_seed != nullptr) return parse(*flag_seed, "--seed");
  if (const char* env = std::getenv("EXPERIMENT_SEED"); env && *env) {
    return parse(env, "EXPERIMENT_SEED");
  }
  if (params.contains("seed")) return params.at("seed").get<std::uint64_t>();
  return 1;
}

namespace {

// Fills defaults and rejects keys the command does not know. A null default
// marks a required key.
json with_defaults(const json& params, const json& defaults,
                   const std::vector<std::string>& required = {}) {
  if (!params.is_object()) {
    throw Error(ErrorCode::kParseError, "config must be a JSON object");
  }
  json out = defaults;
  for (const auto& [key, value] : params.items()) {
    if (key == "seed") continue;
    if (!defaults.contains(key)) {
      throw Error(ErrorCode::kParseError, "unknown config key: " + key);
    }
    out[key] = value;
  }
  for (const auto& key : required) {
    if (out.at(key).is_null()) {
      throw Error(ErrorCode::kParseError, "missing config key: " + key);
    }
  }
  return out;
}

json load_document(const json& v, const fs::path& base) {
  if (v.is_string()) return read_json_file(base / v.get<std::string>());
  if (v.is_object()) return v;
  throw Error(ErrorCode::kParseError, "expected a path or an inline object");
}

MixtureModel load_mixture(const json& v, const fs::path& base) {
  return mixture_from_json(load_document(v, base));
}

// Accepts a distribution or a mixture document.
DenseDistribution load_distribution(const json& v, const fs::path& base) {
  const json doc = load_document(v, base);
  if (doc.contains("components")) return mixture_from_json(doc).mixture();
  return distribution_from_json(doc);
}

void write_json(const fs::path& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

void prepare_out(const RunConfig& config) {
  fs::create_directories(config.out);
  write_json(config.out / "run_config.json", config.to_json());
}

double ate_cstar(const MixtureModel& model, std::uint64_t seed) {
  EstimatorOptions opt;
  opt.seed = seed;
  double c = 0.0;
  for (const auto& comp : model.components()) {
    c = std::max(c, estimate_ate_constant(comp, opt).lower);
  }
  return 1.1 * c;
}

std::vector<double> uniform_grid(double horizon, std::size_t points) {
  points = std::max<std::size_t>(points, 2);
  std::vector<double> grid;
  for (std::size_t g = 0; g < points; ++g) {
    grid.push_back(horizon * static_cast<double>(g) /
                   static_cast<double>(points - 1));
  }
  return grid;
}

std::string trajectory_csv(const Trajectory& tr) {
  std::string out = "trial,t,kl_nats,inter_kl_nats\n";
  for (std::size_t g = 0; g < tr.times.size(); ++g) {
    out += "0," + format_double(tr.times[g]) + ',' +
           format_double(tr.kl_nats[g]) + ',' +
           format_double(tr.inter_kl_nats[g]) + '\n';
  }
  return out;
}

}  // namespace

int cmd_test_identity(const RunConfig& in, std::ostream& log) {
  RunConfig config = in;
  config.params = with_defaults(in.params,
                                {{"mixture", nullptr},
                                 {"hidden", nullptr},
                                 {"eps", 0.5},
                                 {"cstar", nullptr},
                                 {"backend", "exact"}},
                                {"mixture", "hidden"});
  const json& p = config.params;
  const MixtureModel model = load_mixture(p["mixture"], config.base_dir);
  const DenseDistribution hidden = load_distribution(p["hidden"], config.base_dir);
  if (!(hidden.space() == model.space())) {
    throw Error(ErrorCode::kInvalidSetup,
                "hidden law and mixture live on different state spaces");
  }
  const std::string backend_name = p["backend"].get<std::string>();
  OracleBackend backend;
  if (backend_name == "exact") {
    backend = OracleBackend::kExactSlice;
  } else if (backend_name == "glauber") {
    backend = OracleBackend::kGlauber;
  } else {
    throw Error(ErrorCode::kParseError, "backend must be exact or glauber");
  }
  const double cstar = p["cstar"].is_null()
                           ? ate_cstar(model, derive_seed(config.seed, 0))
                           : p["cstar"].get<double>();
  const AlgorithmParams params = AlgorithmParams::make(
      model, p["eps"].get<double>(), cstar, derive_seed(config.seed, 1));
  config.derived = {{"cstar", cstar}, {"algorithm", params.to_json()}};
  prepare_out(config);

  OracleHandle oracle(hidden, derive_seed(config.seed, 2), backend);
  const TestReport report = product_set_kl_test(model, oracle, params);
  write_json(config.out / "test_report.json", report.to_json());
  log << "verdict: " << to_string(report.verdict) << " (T1=" << params.T1
      << ", coordinate_calls=" << report.coordinate_calls
      << ", general_calls=" << report.general_calls << ")\n";
  return report.verdict == Verdict::kAccept ? kExitOk : kExitFail;
}

int cmd_mixing(const RunConfig& in, std::ostream& log) {
  RunConfig config = in;
  config.params = with_defaults(in.params,
                                {{"mixture", nullptr},
                                 {"point_mass", nullptr},
                                 {"eps", 0.1},
                                 {"delta", 0.2},
                                 {"trials", 200},
                                 {"grid_points", 41},
                                 {"m", nullptr},
                                 {"cstar", nullptr},
                                 {"plateau_horizon_factor", 50.0},
                                 {"plateau_level", 0.5},
                                 {"svg", false}},
                                {"mixture"});
  const json& p = config.params;
  const MixtureModel model = load_mixture(p["mixture"], config.base_dir);
  const StateSpace& space = model.space();
  Config start(std::vector<Symbol>(space.n(), 0));
  if (!p["point_mass"].is_null()) {
    start = Config(p["point_mass"].get<std::vector<Symbol>>());
    (void)space.encode(start);  // validates
  }
  config.derived = {{"sample_multiplier", kSampleMultiplier},
                                {"mixing_multiplier", kMixingMultiplier}};
  prepare_out(config);

  const double plateau_t =
      p["plateau_horizon_factor"].get<double>() * static_cast<double>(space.n());
  const std::size_t points = p["grid_points"].get<std::size_t>();
  const Trajectory plateau =
      point_mass_trajectory(model, start, uniform_grid(plateau_t, points));
  write_text_file(config.out / "plateau.csv", trajectory_csv(plateau));

  WarmStartOptions opt;
  opt.m = p["m"].is_null() ? 0 : p["m"].get<std::size_t>();
  opt.cstar = p["cstar"].is_null() ? 0.0 : p["cstar"].get<double>();
  opt.trials = p["trials"].get<std::size_t>();
  opt.grid_points = points;
  opt.eps = p["eps"].get<double>();
  opt.delta = p["delta"].get<double>();
  opt.seed = derive_seed(config.seed, 3);
  opt.jobs = config.jobs;
  const WarmStartReport warm = warm_start_mixing(model, opt);
  write_text_file(config.out / "warm_start.csv", warm.curves_csv());

  const double level = p["plateau_level"].get<double>();
  const bool plateau_holds = plateau.kl_nats.back() >= level;
  json summary;
  summary["instance"] = {{"n", space.n()},
                         {"q", space.q()},
                         {"k", model.k()},
                         {"min_mu", model.mixture().min_prob()}};
  summary["plateau"] = {{"start", std::vector<Symbol>(start.symbols().begin(),
                                                   start.symbols().end())},
                        {"t", plateau_t},
                        {"kl_nats", plateau.kl_nats.back()},
                        {"inter_kl_nats", plateau.inter_kl_nats.back()},
                        {"level", level},
                        {"holds", plateau_holds}};
  summary["warm_start"] = warm.summary();
  const bool pass = plateau_holds && warm.summary()["pass"].get<bool>();
  summary["pass"] = pass;
  write_json(config.out / "summary.json", summary);

  if (p["svg"].get<bool>()) {
    write_text_file(
        config.out / "plateau.svg",
        line_chart_svg({{"KL", plateau.times, plateau.kl_nats},
                        {"inter KL", plateau.times, plateau.inter_kl_nats}},
                       "point-mass start", "t", "nats"));
    std::vector<Series> curves;
    for (std::size_t r = 0; r < std::min<std::size_t>(warm.trials.size(), 10);
         ++r) {
      const Trajectory& tr = warm.trials[r].trajectory;
      curves.push_back({r == 0 ? "KL (10 trials)" : "", tr.times, tr.kl_nats});
    }
    write_text_file(config.out / "warm_start.svg",
                    line_chart_svg(curves, "data-based start", "t", "nats"));
  }
  log << "plateau KL at t=" << plateau_t << ": " << plateau.kl_nats.back()
      << (plateau_holds ? " (holds)" : " (does not hold)") << "\n"
      << "warm start: " << warm.reached << "/" << warm.trials.size()
      << " trials reached eps by t=" << warm.grid.back() << "\n";
  return pass ? kExitOk : kExitFail;
}

int cmd_concentration(const RunConfig& in, std::ostream& log) {
  RunConfig config = in;
  config.params = with_defaults(in.params,
                                {{"rho", nullptr},
                                 {"m", nullptr},
                                 {"lambda", nullptr},
                                 {"eps", nullptr},
                                 {"trials", 100000},
                                 {"mixture", nullptr}},
                                {"m"});
  const json& p = config.params;
  const std::size_t m = p["m"].get<std::size_t>();
  const MonteCarloOptions mc{p["trials"].get<std::size_t>(),
                             derive_seed(config.seed, 4), config.jobs};
  const bool has_rho = !p["rho"].is_null();
  const bool has_mixture = !p["mixture"].is_null();
  if (!has_rho && !has_mixture) {
    throw Error(ErrorCode::kParseError, "need rho or mixture");
  }
  if (p["lambda"].is_null() && p["eps"].is_null()) {
    throw Error(ErrorCode::kParseError, "need lambda or eps");
  }
  if (has_mixture && p["lambda"].is_null()) {
    throw Error(ErrorCode::kParseError, "mixture runs need lambda");
  }
  prepare_out(config);

  json reports = json::array();
  bool pass = true;
  if (has_rho) {
    const auto rho = p["rho"].get<std::vector<double>>();
    if (!p["lambda"].is_null()) {
      const auto r = empirical_kl_mgf(rho, m, p["lambda"].get<double>(), mc);
      reports.push_back(r.to_json());
      pass = pass && r.pass;
    }
    if (!p["eps"].is_null()) {
      const auto r = empirical_kl_tail(rho, m, p["eps"].get<double>(), mc);
      reports.push_back(r.to_json());
      pass = pass && r.pass;
    }
  }
  if (has_mixture) {
    const MixtureModel model = load_mixture(p["mixture"], config.base_dir);
    const auto r =
        mixture_posterior_mgf(model, m, p["lambda"].get<double>(), mc);
    json j = r.to_json();
    j["kind"] = "mixture_mgf";
    reports.push_back(j);
    pass = pass && r.pass;
  }
  write_json(config.out / "concentration.json",
             {{"reports", reports}, {"pass", pass}});
  for (const auto& r : reports) {
    if (r.contains("mixture")) {
      log << "mixture_mgf: estimate=" << r["mixture"]["estimate"]
          << " disjoint=" << r["disjoint"]["estimate"]
          << " bound=" << r["mixture"]["bound"] << " pass=" << r["pass"]
          << "\n";
    } else {
      log << r["kind"].get<std::string>() << ": estimate=" << r["estimate"]
          << " se=" << r["se"] << " bound=" << r["bound"]
          << " pass=" << r["pass"] << "\n";
    }
  }
  return pass ? kExitOk : kExitFail;
}

namespace {

struct CheckTally {
  std::size_t count = 0;
  std::size_t violations = 0;
  double worst = 0.0;

  void gap(double g, double tol) {
    ++count;
    worst = std::max(worst, g);
    if (!(g <= tol)) ++violations;
  }
  void flag(bool ok) {
    ++count;
    if (!ok) ++violations;
  }
  json to_json() const {
    return {{"count", count}, {"violations", violations}, {"worst", worst}};
  }
};

double rel_gap(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

std::vector<double> random_weights(std::size_t size, Rng& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(size);
  double total = 0.0;
  for (double& v : w) {
    v = std::pow(e(rng), 1.5) + 1e-3;
    total += v;
  }
  for (double& v : w) v /= total;
  return w;
}

MixtureModel random_model(std::size_t max_k, std::size_t max_n,
                          std::size_t max_q, Rng& rng) {
  const std::size_t q = 2 + uniform_index(rng, max_q - 1);
  const std::size_t k = 1 + uniform_index(rng, max_k);
  const std::size_t n = 1 + uniform_index(rng, max_n);
  StateSpace space(Alphabet(q), n);
  std::vector<DenseDistribution> comps;
  for (std::size_t a = 0; a < k; ++a) {
    comps.push_back(
        DenseDistribution::from_weights(space, random_weights(space.size(), rng)));
  }
  return MixtureModel(random_weights(k, rng), std::move(comps));
}

}  // namespace

int cmd_verify_identities(const RunConfig& in, std::ostream& log) {
  RunConfig config = in;
  config.params = with_defaults(in.params, {{"instances", json::array()},
                                            {"random_instances", 100},
                                            {"max_k", 4},
                                            {"max_n", 5},
                                            {"max_q", 3},
                                            {"hellinger_pairs", 10000},
                                            {"tolerance", 1e-10},
                                            {"hellinger_tolerance", 1e-12},
                                            {"sobolev_probes", 2},
                                            {"sobolev_max_states", 32}});
  const json& p = config.params;
  const std::size_t max_k = p["max_k"].get<std::size_t>();
  const std::size_t max_n = p["max_n"].get<std::size_t>();
  const std::size_t max_q = p["max_q"].get<std::size_t>();
  if (max_k < 1 || max_n < 1 || max_q < 2) {
    throw Error(ErrorCode::kInvalidParameter, "need max_k, max_n >= 1, max_q >= 2");
  }
  std::vector<MixtureModel> models;
  for (const auto& entry : p["instances"]) {
    models.push_back(load_mixture(entry, config.base_dir));
  }
  Rng rng(derive_seed(config.seed, 5));
  for (std::size_t r = 0; r < p["random_instances"].get<std::size_t>(); ++r) {
    models.push_back(random_model(max_k, max_n, max_q, rng));
  }
  prepare_out(config);

  const double tol = p["tolerance"].get<double>();
  const auto kLog = PhiFunctional::u_log_u();
  const auto kSq = PhiFunctional::u_squared();
  CheckTally chain, flip, rho_fact, homogeneity, balance_floor, sobolev, hk;
  for (const MixtureModel& model : models) {
    const DenseDistribution& mu = model.mixture();
    const DenseDistribution pi =
        DenseDistribution::from_weights(mu.space(), random_weights(mu.size(), rng));
    // Mixtures with holes have no ratio density for a fully supported pi.
    const bool supported = mu.fully_supported();
    const DensityFunction f =
        supported ? density_ratio(pi, mu) : density_ratio(mu, mu);
    for (auto phi : {kLog, kSq}) {
      const ChainRuleParts parts = chain_rule_decompose(model, f, phi);
      chain.gap(rel_gap(parts.inter + parts.intra, parts.total), tol);
    }
    if (supported) {
      const FlipSides sides = conditional_flip_sides(pi, mu);
      flip.gap(rel_gap(sides.lhs, sides.rhs), tol);
      std::vector<double> g(model.k(), 0.0);
      for (std::size_t a = 0; a < model.k(); ++a) {
        for (std::size_t x = 0; x < mu.size(); ++x) {
          g[a] += model.component(a)[x] * f[x];
        }
      }
      rho_fact.gap(rel_gap(phi_entropy(model.weights(), g, kLog),
                           kl(rho_of(model, pi), model.weights())),
                   tol);
      const BalanceResult b = balance(mu);
      balance_floor.flag(mu.min_prob() >=
                         std::pow(b.eta, double(mu.space().n())) * (1 - 1e-12));
    }
    for (double c : {0.25, 3.0}) {
      homogeneity.gap(rel_gap(phi_entropy(mu, f.scaled(c)),
                              c * phi_entropy(mu, f)),
                      tol);
    }
    if (supported && mu.size() <= p["sobolev_max_states"].get<std::size_t>()) {
      bool slices_ok = true;
      for (const auto& comp : model.components()) {
        slices_ok = slices_ok && balance(comp).fully_supported;
      }
      if (!slices_ok) continue;
      for (auto phi : {kLog, kSq}) {
        EstimatorOptions opt;
        opt.seed = derive_seed(config.seed, 6);
        double c = 0.0;
        for (const auto& comp : model.components()) {
          c = std::max(c, estimate_phi_sobolev_constant(comp, phi, opt).lower);
        }
        for (std::size_t s = 0; s < p["sobolev_probes"].get<std::size_t>();
             ++s) {
          std::vector<double> probe = random_weights(mu.size(), rng);
          for (double& v : probe) v *= static_cast<double>(mu.size());
          sobolev.flag(
              weak_phi_sobolev_check(model, DensityFunction(std::move(probe)),
                                     c, phi)
                  .holds);
        }
      }
    }
  }
  const double hk_tol = p["hellinger_tolerance"].get<double>();
  for (std::size_t d : {2, 5, 20}) {
    for (std::size_t r = 0; r < p["hellinger_pairs"].get<std::size_t>(); ++r) {
      const auto a = random_weights(d, rng);
      const auto b = random_weights(d, rng);
      const double eta = *std::min_element(b.begin(), b.end());
      const double bound = kl(a, b) / std::log(std::exp(2.0) / eta);
      // Recorded as the shortfall below the bound.
      hk.gap(std::max(0.0, bound - hellinger_sq(a, b)), hk_tol);
    }
  }

  json checks = {{"chain_rule", chain.to_json()},
                 {"conditional_flip", flip.to_json()},
                 {"rho_pi_fact", rho_fact.to_json()},
                 {"homogeneity", homogeneity.to_json()},
                 {"balance_floor", balance_floor.to_json()},
                 {"weak_phi_sobolev", sobolev.to_json()},
                 {"hellinger_kl", hk.to_json()}};
  std::size_t violations = 0;
  for (const auto& [name, c] : checks.items()) {
    violations += c["violations"].get<std::size_t>();
    log << name << ": " << c["count"] << " checks, " << c["violations"]
        << " violations\n";
  }
  write_json(config.out / "identities.json",
             {{"instances", models.size()},
              {"checks", checks},
              {"violations", violations},
              {"pass", violations == 0}});
  return violations == 0 ? kExitOk : kExitFail;
}

int cmd_estimate_constants(const RunConfig& in, std::ostream& log) {
  RunConfig config = in;
  config.params = with_defaults(in.params, {{"mixture", nullptr},
                                            {"distribution", nullptr},
                                            {"restarts", 20},
                                            {"iters", 500},
                                            {"tol", 1e-9}});
  const json& p = config.params;
  if (p["mixture"].is_null() == p["distribution"].is_null()) {
    throw Error(ErrorCode::kParseError, "give exactly one of mixture, distribution");
  }
  std::vector<DenseDistribution> laws;
  std::size_t n = 0;
  if (!p["mixture"].is_null()) {
    const MixtureModel model = load_mixture(p["mixture"], config.base_dir);
    laws = model.components();
    n = model.space().n();
  } else {
    laws.push_back(load_distribution(p["distribution"], config.base_dir));
    n = laws.front().space().n();
  }
  prepare_out(config);

  EstimatorOptions opt;
  opt.restarts = p["restarts"].get<std::size_t>();
  opt.iters = p["iters"].get<std::size_t>();
  opt.tol = p["tol"].get<double>();
  opt.seed = derive_seed(config.seed, 7);
  auto entry = [](const FunctionalConstantEstimate& e) {
    const char* flag = e.flag == EstimateFlag::kPointMass  ? "point_mass"
                       : e.flag == EstimateFlag::kUnbounded ? "unbounded"
                                                            : "none";
    return json{{"lower", e.lower},
                {"iterations", e.iterations},
                {"converged", e.converged},
                {"flag", flag}};
  };
  json comps = json::array();
  double max_ate = 0.0, max_mlsi = 0.0;
  for (std::size_t a = 0; a < laws.size(); ++a) {
    const auto mlsi = estimate_mlsi_constant(laws[a], opt);
    EstimatorOptions ate_opt = opt;
    ate_opt.warm_starts.push_back(mlsi.witness);
    const auto ate = estimate_ate_constant(laws[a], ate_opt);
    const auto sq =
        estimate_phi_sobolev_constant(laws[a], PhiFunctional::u_squared(), opt);
    max_ate = std::max(max_ate, ate.lower);
    max_mlsi = std::max(max_mlsi, mlsi.lower);
    comps.push_back({{"component", a},
                     {"ate", entry(ate)},
                     {"mlsi", entry(mlsi)},
                     {"phi_sobolev_u_squared", entry(sq)}});
    log << "component " << a << ": ate=" << ate.lower
        << " mlsi=" << mlsi.lower << " u_squared=" << sq.lower << "\n";
  }
  const double nn = static_cast<double>(n);
  write_json(config.out / "constants.json",
             {{"components", comps},
              {"cstar_ate", 1.1 * max_ate},
              {"mixing_rate_constant", 1.1 * 2.0 * max_mlsi / nn}});
  log << "cstar (1.1 x max ATE) = " << 1.1 * max_ate << "\n";
  return kExitOk;
}

}  // namespace mixate::cli
