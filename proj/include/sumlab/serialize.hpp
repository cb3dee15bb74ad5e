#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sumlab/automaton.hpp"
#include "sumlab/constructions.hpp"

namespace sumlab {

inline constexpr const char* kToolVersion = "sumlab 0.1.0";
inline constexpr const char* kSetSpecFormat = "sumlab.setspec/1";

nlohmann::json to_json(const SetSpec& s);
SetSpec setspec_from_json(const nlohmann::json& j);
SetSpec load_setspec(const std::string& path);

struct RunConfig {
  nlohmann::json raw = nlohmann::json::object();
  std::string construction = "patterns";
  DimensionTargets targets;
  ScalePolicy scale_policy = ScalePolicy::scaled;
  std::size_t scale_base = 2;
  std::vector<std::size_t> scale_values;  // explicit n_1, n_2, ... (overrides the policy)
  std::size_t horizon = 5;
  std::optional<std::size_t> depth;
  std::vector<std::size_t> folds{1};
  std::string scales = "boundaries";
  CountMode mode = CountMode::exact;
  BigInt enumeration_budget = pow2(24);
  std::size_t state_budget = 1'000'000;
  std::map<std::string, std::string> outputs;
  std::uint64_t seed = 0;
  std::vector<std::string> patterns;
  std::vector<RunConfig> sources;    // interleave
  std::vector<std::size_t> ranges;   // interleave boundaries M
  std::vector<RunConfig> segments;   // paste
  std::vector<std::size_t> lengths;  // paste segment lengths
  nlohmann::json plunnecke = nlohmann::json::object();
};

/// Unknown keys anywhere in the document are rejected with ConfigError.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

ScaleSequence scale_sequence_of(const RunConfig& c);
SetSpec build_spec(const RunConfig& c);

std::string sha256_hex(std::string_view data);
/// Digest of the canonical (key-sorted, compact) form of the raw config.
std::string config_digest(const nlohmann::json& raw);

nlohmann::json read_json_file(const std::string& path);

}  // namespace sumlab
