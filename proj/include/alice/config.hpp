#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "alice/alice_core.hpp"
#include "alice/linear_env.hpp"

namespace alice {

inline constexpr std::string_view kArtifactVersion = "0.1.0";

struct ExperimentConfig {
  std::string name = "custom";
  PlantConfig plant;
  AliceParams alice;
  std::vector<std::string> controllers;
  std::int64_t horizon = 500;
  std::vector<std::uint64_t> seeds;
  std::uint64_t base_seed = 0;
  std::string out_dir = "out";
  bool emit_svg = false;

  void validate() const;
};

/// Known controller names: alice, lqr_oracle, zero, random.
bool is_controller_name(std::string_view name);

/// seeds = base_seed, base_seed + 1, ..., base_seed + count - 1.
std::vector<std::uint64_t> seed_range(std::uint64_t base_seed, std::int64_t count);

/// exp1, exp2, exp3 or exp1_noiseless. Throws ConfigError otherwise.
ExperimentConfig preset(std::string_view name);

/// Parses the JSON config document. Throws ConfigError on schema errors.
ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ExperimentConfig& config);

ExperimentConfig load_config(const std::string& path);

}  // namespace alice
