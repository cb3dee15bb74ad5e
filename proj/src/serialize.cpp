#include "sumlab/serialize.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "sumlab/errors.hpp"

namespace sumlab {

namespace {

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

std::vector<Rational> rationals(const nlohmann::json& j, const std::string& name) {
  if (!j.is_array()) throw ConfigError(name + " must be an array of rationals");
  std::vector<Rational> out;
  for (const auto& x : j) {
    if (x.is_string())
      out.push_back(parse_rational(x.get<std::string>()));
    else if (x.is_number_integer())
      out.emplace_back(x.get<long>());
    else
      throw ConfigError(name + " entries must be strings such as \"1/2\"");
  }
  return out;
}

std::size_t count_of(const nlohmann::json& j, const std::string& name) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    throw ConfigError(name + " must be a nonnegative integer");
  return j.get<std::size_t>();
}

std::vector<std::size_t> counts_of(const nlohmann::json& j, const std::string& name) {
  if (!j.is_array()) throw ConfigError(name + " must be an array of integers");
  std::vector<std::size_t> out;
  for (const auto& x : j) out.push_back(count_of(x, name));
  return out;
}

}  // namespace

// ---------------------------------------------------------------- SetSpec

nlohmann::json to_json(const SetSpec& s) {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : s.components) comps.push_back(c.str());
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& z : s.zero_runs)
    runs.push_back({{"first", z.first}, {"last", z.last}, {"block", z.block}, {"component", z.component}, {"kind", z.kind}});
  return {{"format", kSetSpecFormat},
          {"construction", s.construction},
          {"params", s.params},
          {"depth", s.depth},
          {"scales", s.scales},
          {"schedule", s.schedule},
          {"zero_runs", runs},
          {"components", comps}};
}

SetSpec setspec_from_json(const nlohmann::json& j) {
  reject_unknown(j, {"format", "construction", "params", "depth", "scales", "schedule", "zero_runs", "components"},
                 "set spec");
  if (j.value("format", "") != kSetSpecFormat) throw ConfigError("set spec format must be " + std::string(kSetSpecFormat));
  SetSpec s;
  try {
    s.construction = j.at("construction").get<std::string>();
    s.params = j.value("params", nlohmann::json::object());
    s.depth = j.at("depth").get<std::size_t>();
    s.scales = j.value("scales", std::vector<std::size_t>{});
    s.schedule = j.value("schedule", std::vector<std::vector<std::string>>{});
    for (const auto& z : j.value("zero_runs", nlohmann::json::array()))
      s.zero_runs.push_back({z.at("first").get<std::size_t>(), z.at("last").get<std::size_t>(),
                             z.at("block").get<std::size_t>(), z.at("component").get<std::size_t>(),
                             z.at("kind").get<std::string>()});
    for (const auto& c : j.at("components")) s.components.push_back(DigitPattern::parse(c.get<std::string>()));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed set spec: ") + e.what());
  }
  try {
    s.validate();
  } catch (const InvariantViolation& e) {
    throw ConfigError(std::string("inconsistent set spec: ") + e.what());
  }
  return s;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

SetSpec load_setspec(const std::string& path) { return setspec_from_json(read_json_file(path)); }

// ---------------------------------------------------------------- RunConfig

RunConfig parse_run_config(const nlohmann::json& j) {
  reject_unknown(j,
                 {"construction", "alpha", "beta", "gamma", "scale_policy", "scale_values", "horizon", "depth", "folds",
                  "scales", "mode", "budgets", "outputs", "seed", "patterns", "sources", "ranges", "segments",
                  "lengths", "plunnecke"},
                 "config");
  RunConfig c;
  c.raw = j;
  try {
    if (j.contains("construction")) c.construction = j["construction"].get<std::string>();
    if (j.contains("alpha")) c.targets.alpha = rationals(j["alpha"], "alpha");
    if (j.contains("beta")) c.targets.beta = rationals(j["beta"], "beta");
    if (j.contains("gamma")) c.targets.gamma = rationals(j["gamma"], "gamma");
    if (j.contains("scale_policy")) {
      const auto& sp = j["scale_policy"];
      if (sp.is_string()) {
        c.scale_policy = parse_scale_policy(sp.get<std::string>());
      } else {
        reject_unknown(sp, {"kind", "base"}, "scale_policy");
        c.scale_policy = parse_scale_policy(sp.value("kind", "scaled"));
        if (sp.contains("base")) c.scale_base = count_of(sp["base"], "scale_policy.base");
      }
    }
    if (j.contains("scale_values")) c.scale_values = counts_of(j["scale_values"], "scale_values");
    if (j.contains("horizon")) c.horizon = count_of(j["horizon"], "horizon");
    if (j.contains("depth")) c.depth = count_of(j["depth"], "depth");
    if (j.contains("folds")) {
      c.folds = j["folds"].is_array() ? counts_of(j["folds"], "folds")
                                      : std::vector<std::size_t>{count_of(j["folds"], "folds")};
      for (auto f : c.folds)
        if (f == 0) throw ConfigError("folds must be positive");
    }
    if (j.contains("scales")) {
      const auto& s = j["scales"];
      if (s.is_string()) {
        c.scales = s.get<std::string>();
      } else {
        std::string list;
        for (auto v : counts_of(s, "scales")) list += (list.empty() ? "" : ",") + std::to_string(v);
        c.scales = list;
      }
    }
    if (j.contains("mode")) c.mode = parse_count_mode(j["mode"].get<std::string>());
    if (j.contains("budgets")) {
      const auto& b = j["budgets"];
      reject_unknown(b, {"enumeration", "states"}, "budgets");
      if (b.contains("enumeration")) c.enumeration_budget = static_cast<unsigned long>(count_of(b["enumeration"], "budgets.enumeration"));
      if (b.contains("states")) c.state_budget = count_of(b["states"], "budgets.states");
    }
    if (j.contains("outputs")) {
      reject_unknown(j["outputs"], {"csv", "json", "spec"}, "outputs");
      for (const auto& [k, v] : j["outputs"].items()) c.outputs[k] = v.get<std::string>();
    }
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("patterns")) c.patterns = j["patterns"].get<std::vector<std::string>>();
    if (j.contains("sources"))
      for (const auto& s : j["sources"]) c.sources.push_back(parse_run_config(s));
    if (j.contains("ranges")) c.ranges = counts_of(j["ranges"], "ranges");
    if (j.contains("segments"))
      for (const auto& s : j["segments"]) c.segments.push_back(parse_run_config(s));
    if (j.contains("lengths")) c.lengths = counts_of(j["lengths"], "lengths");
    if (j.contains("plunnecke")) {
      reject_unknown(j["plunnecke"], {"a", "b", "fold", "j_min", "j_max", "pairs", "samples"}, "plunnecke");
      c.plunnecke = j["plunnecke"];
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return c;
}

RunConfig load_run_config(const std::string& path) { return parse_run_config(read_json_file(path)); }

ScaleSequence scale_sequence_of(const RunConfig& c) {
  if (!c.scale_values.empty()) return ScaleSequence::from_values(c.scale_values);
  return make_scale_sequence(c.scale_policy, c.horizon, c.scale_base);
}

SetSpec build_spec(const RunConfig& c) {
  if (c.construction == "patterns") {
    if (c.patterns.empty()) throw ConfigError("construction 'patterns' needs a nonempty 'patterns' list");
    SetSpec s;
    for (const auto& p : c.patterns) s.components.push_back(DigitPattern::parse(p));
    s.depth = s.components.front().size();
    for (const auto& p : s.components)
      if (p.size() != s.depth) throw ConfigError("all patterns must have the same length");
    if (c.depth && *c.depth != s.depth) throw ConfigError("depth does not match the pattern length");
    return s;
  }
  if (c.construction == "interleave") {
    if (c.sources.size() != 2) throw ConfigError("interleave needs exactly two sources");
    return interleave(build_spec(c.sources[0]), build_spec(c.sources[1]), c.ranges);
  }
  if (c.construction == "paste") {
    std::vector<SetSpec> specs;
    for (const auto& s : c.segments) specs.push_back(build_spec(s));
    return paste(specs, PastingPlan{c.lengths});
  }
  return build_example(parse_example(c.construction), c.targets, scale_sequence_of(c), c.depth);
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw InvariantViolation("SHA-256 computation failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

std::string config_digest(const nlohmann::json& raw) { return sha256_hex(raw.dump()); }

}  // namespace sumlab
