#include <exception>
#include <ostream>

#include <CLI11.hpp>

#include "cli.hpp"
#include "mixate/error.hpp"
#include "mixate/serialize.hpp"

namespace mixate::cli {

int run(const std::vector<std::string>& args, std::ostream& log,
        std::ostream& err) {
  CLI::App app{"mixate: identity testing and mixing experiments for "
               "mixtures of discrete distributions"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir = "out";
  std::size_t jobs = 1;
  std::string seed_text;
  app.add_option("--config", config_path, "JSON run config");
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--jobs", jobs, "worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  CLI::Option* seed_opt =
      app.add_option("--seed", seed_text, "global seed (u64)");

  using Command = int (*)(const RunConfig&, std::ostream&);
  const std::vector<std::tuple<const char*, const char*, Command>> commands{
      {"test-identity", "run the product-set KL identity test",
       &cmd_test_identity},
      {"mixing", "point-mass plateau vs data-based warm start", &cmd_mixing},
      {"concentration", "empirical KL tail and MGF bounds", &cmd_concentration},
      {"verify-identities", "exact identity battery", &cmd_verify_identities},
      {"estimate-constants", "ATE, MLSI and u^2 Sobolev estimates",
       &cmd_estimate_constants},
  };
  for (const auto& [name, help, fn] : commands) {
    app.add_subcommand(name, help)->fallthrough();
  }

  std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      log << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  try {
    RunConfig config;
    config.command = app.get_subcommands().front()->get_name();
    config.out = out_dir;
    config.jobs = jobs;
    if (!config_path.empty()) {
      config.params = read_json_file(config_path);
      config.base_dir = std::filesystem::absolute(config_path).parent_path();
      if (!config.params.is_object()) {
        throw Error(ErrorCode::kParseError, "config must be a JSON object");
      }
      // A run_config.json written by an earlier run.
      if (config.params.contains("command") &&
          config.params.contains("params")) {
        if (config.params["command"] != config.command) {
          throw Error(ErrorCode::kParseError,
                      "config was written by another subcommand");
        }
        nlohmann::json inner = config.params["params"];
        if (config.params.contains("seed")) {
          inner["seed"] = config.params["seed"];
        }
        if (config.params.contains("base_dir")) {
          config.base_dir =
              config.params["base_dir"].get<std::string>();
        }
        config.params = std::move(inner);
      }
    }
    config.seed =
        resolve_seed(config.params, seed_opt->count() ? &seed_text : nullptr);
    for (const auto& [name, help, fn] : commands) {
      if (config.command == name) return fn(config, log);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
  } catch (const nlohmann::json::exception& e) {
    err << "error: bad config value: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitInvalid;
}

}  // namespace mixate::cli
