#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace mixate::cli {

enum ExitCode : int { kExitOk = 0, kExitFail = 1, kExitInvalid = 2 };

// Everything a run depends on. Written to <out>/run_config.json with all
// defaults filled in, so a run can be repeated from that file alone.
struct RunConfig {
  std::string command;
  nlohmann::json params = nlohmann::json::object();
  nlohmann::json derived;  // values computed from params, for the record
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  std::filesystem::path out = "out";
  std::filesystem::path base_dir = ".";  // relative paths in params resolve here

  nlohmann::json to_json() const;
};

// Seed precedence: --seed, then EXPERIMENT_SEED, then the config's "seed".
std::uint64_t resolve_seed(const nlohmann::json& params,
                           const std::string* flag_seed);

int cmd_test_identity(const RunConfig& config, std::ostream& log);
int cmd_mixing(const RunConfig& config, std::ostream& log);
int cmd_concentration(const RunConfig& config, std::ostream& log);
int cmd_verify_identities(const RunConfig& config, std::ostream& log);
int cmd_estimate_constants(const RunConfig& config, std::ostream& log);

// Full command line, argv[0] included.
int run(const std::vector<std::string>& args, std::ostream& log,
        std::ostream& err);

}  // namespace mixate::cli
