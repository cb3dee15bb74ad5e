#include "sumlab/cli.hpp"

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "sumlab/analysis.hpp"
#include "sumlab/errors.hpp"
#include "sumlab/plunnecke.hpp"
#include "sumlab/serialize.hpp"

namespace sumlab {

namespace {

struct Options {
  std::string config;
  std::string set;
  std::vector<std::size_t> folds;
  std::optional<std::size_t> depth;
  std::string scales;
  std::string mode;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> budget_enum;
  std::optional<std::size_t> budget_states;
};

// Everything a command needs after merging the config file with flags.
struct Job {
  RunConfig cfg;
  nlohmann::json effective = nlohmann::json::object();  // digested
  std::optional<SetSpec> spec;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomic(const std::string& path, const std::string& data) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
    if (!o) throw ConfigError("cannot write " + tmp);
    o << data;
    o.flush();
    if (!o) {
      std::filesystem::remove(tmp);
      throw ConfigError("write failed for " + path);
    }
  }
  std::filesystem::rename(tmp, path);
}

void emit(const std::string& path, const std::string& data, std::ostream& out) {
  if (path.empty() || path == "-")
    out << data;
  else
    write_atomic(path, data);
}

std::string output_path(const Options& o, const RunConfig& c, const std::string& key) {
  if (!o.out.empty()) return o.out;
  auto it = c.outputs.find(key);
  return it == c.outputs.end() ? std::string() : it->second;
}

Job prepare(const Options& o, bool need_spec) {
  Job job;
  if (!o.config.empty()) job.cfg = load_run_config(o.config);
  if (o.depth) job.cfg.depth = *o.depth;
  if (!o.folds.empty()) job.cfg.folds = o.folds;
  if (!o.scales.empty()) job.cfg.scales = o.scales;
  if (!o.mode.empty()) job.cfg.mode = parse_count_mode(o.mode);
  if (o.seed) job.cfg.seed = *o.seed;
  if (o.budget_enum) job.cfg.enumeration_budget = static_cast<unsigned long>(*o.budget_enum);
  if (o.budget_states) job.cfg.state_budget = *o.budget_states;

  job.effective = {{"config", job.cfg.raw},
                   {"folds", job.cfg.folds},
                   {"scales", job.cfg.scales},
                   {"mode", to_string(job.cfg.mode)},
                   {"seed", job.cfg.seed},
                   {"budgets", {{"enumeration", to_string(job.cfg.enumeration_budget)}, {"states", job.cfg.state_budget}}}};
  if (o.depth) job.effective["depth"] = *o.depth;
  if (!need_spec) return job;
  if (!o.set.empty()) {
    job.spec = load_setspec(o.set);
    job.effective["set"] = "sha256:" + sha256_hex(slurp(o.set));
  } else if (!o.config.empty()) {
    job.spec = build_spec(job.cfg);
  } else {
    throw ConfigError("this command needs --set or --config");
  }
  return job;
}

std::vector<std::string> header(const Job& job) {
  return {kToolVersion, "config-digest: sha256:" + config_digest(job.effective)};
}

nlohmann::json json_header(const Job& job) {
  return {{"tool", kToolVersion}, {"config_digest", "sha256:" + config_digest(job.effective)}};
}

std::string with_context(const std::string& what, std::size_t fold) {
  return what + " (fold " + std::to_string(fold) + ")";
}

int cmd_construct(const Options& o, std::ostream& out) {
  if (o.config.empty()) throw ConfigError("construct needs --config");
  Job job = prepare(o, true);
  nlohmann::json doc = to_json(*job.spec);
  doc["params"]["tool"] = kToolVersion;
  doc["params"]["config_digest"] = "sha256:" + config_digest(job.effective);
  const std::string path = output_path(o, job.cfg, "spec");
  const std::string text = doc.dump(1) + "\n";
  if (path.empty()) {
    out << text;
  } else {
    write_atomic(path, text);
    out << "components=" << job.spec->components.size() << " depth=" << job.spec->depth << "\n";
  }
  return 0;
}

std::vector<TraceEntry> run_traces(const Job& job, bool& fell_back) {
  const SetSpec& s = *job.spec;
  const auto scales = select_scales(s, job.cfg.scales);
  std::vector<TraceEntry> all;
  fell_back = false;
  for (std::size_t fold : job.cfg.folds) {
    try {
      auto tr = count_trace(s, fold, scales, job.cfg.mode, EngineOptions{job.cfg.state_budget});
      fell_back = fell_back || tr.fell_back;
      all.insert(all.end(), tr.entries.begin(), tr.entries.end());
    } catch (const ScaleError& e) {
      throw ScaleError(with_context(e.what(), fold));
    } catch (const BudgetExceeded& e) {
      throw BudgetExceeded(with_context(e.what(), fold));
    }
  }
  return all;
}

int cmd_count(const Options& o, std::ostream& out, std::ostream& err) {
  Job job = prepare(o, true);
  bool fell_back = false;
  auto entries = run_traces(job, fell_back);
  if (fell_back) err << "note: exact engine exceeded the state budget; bracket mode was used\n";
  std::ostringstream csv;
  write_trace_csv(csv, entries, header(job));
  emit(output_path(o, job.cfg, "csv"), csv.str(), out);
  return 0;
}

int cmd_dims(const Options& o, std::ostream& out, std::ostream& err) {
  Job job = prepare(o, true);
  bool fell_back = false;
  auto entries = run_traces(job, fell_back);
  if (fell_back) err << "note: exact engine exceeded the state budget; bracket mode was used\n";
  nlohmann::json doc = json_header(job);
  doc["depth"] = job.spec->depth;
  doc["scales"] = select_scales(*job.spec, job.cfg.scales);
  nlohmann::json folds = nlohmann::json::array();
  for (std::size_t fold : job.cfg.folds) {
    double lo_min = 0, lo_max = 0, up_min = 0, up_max = 0, pr_min = 0, pr_max = 0;
    bool first = true;
    std::string mode = "exact";
    for (const auto& e : entries) {
      if (e.fold != fold) continue;
      if (first) {
        lo_min = lo_max = e.exp_lower;
        up_min = up_max = e.exp_upper;
        pr_min = pr_max = e.predicted;
        first = false;
      }
      lo_min = std::min(lo_min, e.exp_lower);
      lo_max = std::max(lo_max, e.exp_lower);
      up_min = std::min(up_min, e.exp_upper);
      up_max = std::max(up_max, e.exp_upper);
      pr_min = std::min(pr_min, e.predicted);
      pr_max = std::max(pr_max, e.predicted);
      mode = to_string(e.mode);
    }
    folds.push_back({{"fold", fold},
                     {"mode", mode},
                     {"liminf_proxy", {{"exp_lower", format_double(lo_min)}, {"exp_upper", format_double(up_min)}}},
                     {"limsup_proxy", {{"exp_lower", format_double(lo_max)}, {"exp_upper", format_double(up_max)}}},
                     {"predicted", {{"min", format_double(pr_min)}, {"max", format_double(pr_max)}}}});
  }
  doc["folds"] = folds;
  emit(output_path(o, job.cfg, "json"), doc.dump(1) + "\n", out);
  return 0;
}

int cmd_off(const Options& o, std::ostream& out) {
  Job job = prepare(o, true);
  auto tr = off_trace(*job.spec, select_scales(*job.spec, job.cfg.scales));
  std::ostringstream csv;
  write_off_csv(csv, tr, header(job));
  emit(output_path(o, job.cfg, "csv"), csv.str(), out);
  return 0;
}

PointSample load_sample(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open sample file " + path);
  return PointSample::parse(in);
}

int cmd_plunnecke(const Options& o, std::ostream& out) {
  Job job = prepare(o, false);
  const auto& p = job.cfg.plunnecke;
  nlohmann::json doc = json_header(job);
  std::string line;
  if (p.contains("a") || p.contains("b")) {
    if (!p.contains("a") || !p.contains("b")) throw ConfigError("plunnecke needs both sample files a and b");
    const auto a = load_sample(p["a"].get<std::string>());
    const auto b = load_sample(p["b"].get<std::string>());
    std::size_t fold = p.value("fold", std::size_t{2});
    if (!o.folds.empty()) fold = o.folds.front();
    const auto rep = prop31_check(a, b, fold, p.value("j_min", std::size_t{1}), p.value("j_max", std::size_t{12}));
    doc["prop31"] = to_json(rep);
    line = std::string(rep.all_stated ? "PASS" : "FAIL") + " prop31 fold=" + std::to_string(fold) +
           " stated=" + (rep.all_stated ? "hold" : "violated") + " certified=" + (rep.all_certified ? "hold" : "violated");
  } else {
    const auto s = run_random_suite(job.cfg.seed, p.value("pairs", std::size_t{1000}), p.value("samples", std::size_t{500}),
                                    p.value("j_max", std::size_t{12}));
    doc["suite"] = to_json(s);
    const bool ok = s.ruzsa_failures == 0 && s.cover_failures_stated == 0 && s.prop31_failures_stated == 0;
    line = std::string(ok ? "PASS" : "FAIL") + " seed=" + std::to_string(s.seed) +
           " ruzsa=" + std::to_string(s.ruzsa_cases - s.ruzsa_failures) + "/" + std::to_string(s.ruzsa_cases) +
           " cover=" + std::to_string(s.cover_cases - s.cover_failures_stated) + "/" + std::to_string(s.cover_cases) +
           " prop31=" + std::to_string(s.prop31_cases - s.prop31_failures_stated) + "/" + std::to_string(s.prop31_cases) +
           " (certified constant 2l-1: cover failures " + std::to_string(s.cover_failures_certified) +
           ", prop31 failures " + std::to_string(s.prop31_failures_certified) + ")";
  }
  const std::string path = output_path(o, job.cfg, "json");
  if (path.empty()) {
    out << doc.dump(1) << "\n";
  } else {
    write_atomic(path, doc.dump(1) + "\n");
  }
  out << line << "\n";
  return 0;
}

int cmd_validate(const Options& o, std::ostream& out) {
  if (o.config.empty()) throw ConfigError("validate needs --config");
  Job job = prepare(o, false);
  const auto& t = job.cfg.targets;
  std::size_t lmax = std::max({t.alpha.size(), t.beta.size(), t.gamma.size(), std::size_t{1}});
  if (!o.folds.empty()) lmax = o.folds.front();
  const auto rep = validate_targets(t, lmax);
  nlohmann::json doc = json_header(job);
  doc["ok"] = rep.ok;
  doc["checked"] = rep.checked;
  nlohmann::json v = nlohmann::json::array();
  for (const auto& i : rep.violations) v.push_back({{"constraint", i.constraint}, {"detail", i.detail}});
  doc["violations"] = v;
  const std::string path = output_path(o, job.cfg, "json");
  if (!path.empty()) write_atomic(path, doc.dump(1) + "\n");
  if (rep.ok) {
    out << "PASS " << rep.checked.size() << " constraints\n";
    return 0;
  }
  out << "FAIL " << rep.violations.front().constraint << " (" << rep.violations.front().detail << ")\n";
  return 3;
}

int cmd_oracle(const Options& o, std::ostream& out) {
  Options oo = o;
  if (oo.scales.empty()) oo.scales = "all";
  Job job = prepare(oo, true);
  const SetSpec& s = *job.spec;
  const auto scales = select_scales(s, job.cfg.scales);
  std::ostringstream csv;
  for (const auto& h : header(job)) csv << "# " << h << "\n";
  csv << "j,fold,engine_starts,oracle_starts,engine_cells,oracle_cells,match\n";
  bool all = true;
  for (std::size_t fold : job.cfg.folds) {
    auto res = sum_prefix_cover(s, fold, scales, CountMode::exact, EngineOptions{job.cfg.state_budget});
    for (const auto& sc : res.scales) {
      OracleResult orc;
      try {
        orc = brute_force_oracle(s, fold, sc.j, job.cfg.enumeration_budget);
      } catch (const BudgetExceeded& e) {
        throw BudgetExceeded(std::string(e.what()) + " at scale " + std::to_string(sc.j) + ", fold " + std::to_string(fold));
      }
      const bool ok = sc.starts.lower == orc.starts && sc.starts.upper == orc.starts && sc.cells.upper == orc.cells &&
                      sc.cells.lower == orc.cells;
      all = all && ok;
      csv << sc.j << ',' << fold << ',' << to_string(sc.starts.lower) << ',' << to_string(orc.starts) << ','
          << to_string(sc.cells.upper) << ',' << to_string(orc.cells) << ',' << (ok ? "yes" : "no") << "\n";
    }
  }
  emit(output_path(o, job.cfg, "csv"), csv.str(), out);
  out << (all ? "MATCH" : "MISMATCH") << "\n";
  return all ? 0 : 5;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Digit-pattern sumset laboratory"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* c, bool spec_input) {
    c->add_option("--config", o.config, "JSON run config");
    if (spec_input) c->add_option("--set", o.set, "set spec JSON written by construct");
    c->add_option("--out", o.out, "output path (default: stdout)");
    c->add_option("--depth", o.depth, "truncation depth");
    c->add_option("--seed", o.seed, "random seed");
  };
  auto counting = [&](CLI::App* c) {
    c->add_option("--fold", o.folds, "fold(s) to analyze");
    c->add_option("--scales", o.scales, "boundaries | all | comma separated list");
    c->add_option("--mode", o.mode, "exact | bracket");
    c->add_option("--budget-states", o.budget_states, "subset-state budget of the exact engine");
    c->add_option("--budget-enum", o.budget_enum, "oracle enumeration budget");
  };
  auto* construct = app.add_subcommand("construct", "build a set spec from a config");
  common(construct, false);
  auto* count = app.add_subcommand("count", "box-count trace CSV");
  common(count, true);
  counting(count);
  auto* dims = app.add_subcommand("dims", "exponent summary JSON");
  common(dims, true);
  counting(dims);
  auto* off = app.add_subcommand("off", "OFF_n trace CSV");
  common(off, true);
  counting(off);
  auto* plun = app.add_subcommand("plunnecke", "sumset inequality checks");
  common(plun, false);
  plun->add_option("--fold", o.folds, "fold");
  auto* validate = app.add_subcommand("validate", "check dimension targets");
  common(validate, false);
  validate->add_option("--fold", o.folds, "largest fold to check");
  auto* oracle = app.add_subcommand("oracle", "engine against brute force");
  common(oracle, true);
  counting(oracle);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*construct) return cmd_construct(o, out);
    if (*count) return cmd_count(o, out, err);
    if (*dims) return cmd_dims(o, out, err);
    if (*off) return cmd_off(o, out);
    if (*plun) return cmd_plunnecke(o, out);
    if (*validate) return cmd_validate(o, out);
    if (*oracle) return cmd_oracle(o, out);
  } catch (const AdmissibilityError& e) {
    err << "error: admissibility violated: " << e.constraint() << "\n  " << e.what() << "\n";
    return e.exit_code();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 5;
  }
  return 2;
}

}  // namespace sumlab
