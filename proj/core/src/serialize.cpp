#include "mixate/serialize.hpp"

#include <charconv>
#include <fstream>

#include "mixate/error.hpp"

namespace mixate {

std::string format_double(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

nlohmann::json to_json(const DenseDistribution& mu) {
  nlohmann::json j;
  j["q"] = mu.space().q();
  j["n"] = mu.space().n();
  j["probs"] = std::vector<double>(mu.probs().begin(), mu.probs().end());
  return j;
}

DenseDistribution distribution_from_json(const nlohmann::json& j) {
  try {
    const auto q = j.at("q").get<std::size_t>();
    const auto n = j.at("n").get<std::size_t>();
    auto probs = j.at("probs").get<std::vector<double>>();
    return DenseDistribution(StateSpace(Alphabet(q), n), std::move(probs));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

nlohmann::json to_json(const MixtureModel& model) {
  nlohmann::json j;
  j["weights"] =
      std::vector<double>(model.weights().begin(), model.weights().end());
  j["components"] = nlohmann::json::array();
  for (const auto& c : model.components()) {
    j["components"].push_back(to_json(c));
  }
  return j;
}

MixtureModel mixture_from_json(const nlohmann::json& j) {
  std::vector<double> weights;
  std::vector<DenseDistribution> components;
  try {
    weights = j.at("weights").get<std::vector<double>>();
    for (const auto& c : j.at("components")) {
      components.push_back(distribution_from_json(c));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  if (components.empty()) {
    throw Error(ErrorCode::kParseError, "mixture has no components");
  }
  return MixtureModel(std::move(weights), std::move(components));
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kParseError, "cannot open " + path.string());
  }
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& text) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::kInvalidParameter,
                "cannot write " + path.string());
  }
  out << text;
}

}  // namespace mixate
