#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "mixate/distribution.hpp"
#include "mixate/mixture.hpp"

namespace mixate {

// Shortest decimal that parses back to the same double.
std::string format_double(double value);

// {"q": int, "n": int, "probs": [...]}, big-endian index order.
nlohmann::json to_json(const DenseDistribution& mu);
DenseDistribution distribution_from_json(const nlohmann::json& j);

// {"weights": [...], "components": [dist, ...]}
nlohmann::json to_json(const MixtureModel& model);
MixtureModel mixture_from_json(const nlohmann::json& j);

// File helpers. Errors (missing file, bad JSON, bad table) surface as
// Error with ParseError or the validation code.
nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path,
                     const std::string& text);

}  // namespace mixate
