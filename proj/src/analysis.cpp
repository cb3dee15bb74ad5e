#include "sumlab/analysis.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>

#include "sumlab/errors.hpp"

namespace sumlab {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::vector<std::size_t> default_scales(const SetSpec& s) {
  std::vector<std::size_t> v;
  if (s.scales.empty()) {
    for (std::size_t j = 1; j <= s.depth; ++j) v.push_back(j);
    return v;
  }
  v = s.block_boundaries();
  for (const auto& z : s.zero_runs)
    if (z.last + 1 <= s.depth) v.push_back(z.last + 1);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  v.erase(std::remove(v.begin(), v.end(), std::size_t{0}), v.end());
  return v;
}

std::vector<std::size_t> select_scales(const SetSpec& s, const std::string& sel) {
  if (sel.empty() || sel == "boundaries") return default_scales(s);
  std::vector<std::size_t> v;
  if (sel == "all") {
    for (std::size_t j = 1; j <= s.depth; ++j) v.push_back(j);
    return v;
  }
  std::stringstream in(sel);
  for (std::string tok; std::getline(in, tok, ',');) {
    std::size_t pos = 0;
    unsigned long long j = 0;
    try {
      j = std::stoull(tok, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != tok.size()) throw ConfigError("bad scale '" + tok + "' in scale list");
    if (j == 0 || j > s.depth)
      throw ScaleError("scale " + tok + " outside [1, " + std::to_string(s.depth) + "]");
    v.push_back(static_cast<std::size_t>(j));
  }
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<BigInt> carry_free_union_counts(const SetSpec& s, std::size_t fold, const std::vector<std::size_t>& scales) {
  s.validate();
  SetSpec ors;
  ors.depth = s.depth;
  std::map<std::vector<std::uint64_t>, bool> seen;
  for (const auto& combo : fold_combinations(s.components.size(), fold)) {
    DigitPattern p = s.components[combo[0]];
    for (std::size_t t = 1; t < combo.size(); ++t) p = p | s.components[combo[t]];
    if (seen.emplace(p.words(), true).second) ors.components.push_back(std::move(p));
  }
  return prefix_counts(ors, scales);
}

CountTrace count_trace(const SetSpec& s, std::size_t fold, const std::vector<std::size_t>& scales, CountMode mode,
                       const EngineOptions& options) {
  CountTrace tr;
  if (scales.empty()) return tr;
  auto res = sum_prefix_cover(s, fold, scales, mode, options);
  tr.fell_back = res.fell_back;
  std::vector<std::size_t> js;
  for (const auto& sc : res.scales) js.push_back(sc.j);
  auto pred = carry_free_union_counts(s, fold, js);
  for (std::size_t i = 0; i < res.scales.size(); ++i) {
    const auto& sc = res.scales[i];
    TraceEntry e;
    e.j = sc.j;
    e.fold = fold;
    e.lower = sc.starts.lower;
    e.upper = sc.cells.upper;
    const double j = static_cast<double>(sc.j);
    e.exp_lower = log2_of(e.lower) / j;
    e.exp_upper = log2_of(e.upper) / j;
    e.predicted = log2_of(pred[i]) / j;
    e.mode = res.used;
    tr.entries.push_back(std::move(e));
  }
  return tr;
}

Rational sum_block_frequency(const std::vector<BlockKind>& kinds, const BlockParams& params) {
  if (kinds.empty()) throw ConfigError("sum block needs at least one kind");
  DigitPattern m = chunk_template(kinds[0], params);
  for (std::size_t i = 1; i < kinds.size(); ++i) m = m | chunk_template(kinds[i], params);
  Rational f(static_cast<unsigned long>(m.count_free()), static_cast<unsigned long>(params.k));
  f.canonicalize();
  return f;
}

std::vector<FrequencyRecord> frequency_report(const ScheduleTable& table, const DimensionTargets& targets,
                                              const ScaleSequence& scales, std::size_t fold, std::size_t blocks,
                                              DelayVariant variant, FloorPolicy policy) {
  std::vector<FrequencyRecord> out;
  const auto combos = fold_combinations(table.rows.size(), fold);
  for (std::size_t k = 1; k <= blocks; ++k) {
    const BlockParams bp = block_params(k, targets, scales, variant, policy);
    FrequencyRecord rec;
    rec.k = k;
    bool first = true;
    for (const auto& c : combos) {
      std::vector<BlockKind> kinds;
      for (std::size_t r : c) kinds.push_back(table.at(r, k));
      const Rational f = sum_block_frequency(kinds, bp);
      if (first || f > rec.max_frequency) {
        rec.max_frequency = f;
        rec.rows = c;
        rec.kinds.clear();
        for (const auto& kd : kinds) rec.kinds.push_back(kd.name());
      }
      if (first || f < rec.min_frequency) rec.min_frequency = f;
      first = false;
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<OffEntry> off_trace(const SetSpec& s, const std::vector<std::size_t>& scales) {
  std::vector<std::size_t> v = scales;
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  auto offs = branching_min_averages(s, v);
  std::vector<OffEntry> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    OffEntry e{v[i], offs[i], offs[i]};
    if (!out.empty() && out.back().running_min < e.off) e.running_min = out.back().running_min;
    out.push_back(std::move(e));
  }
  return out;
}

FreedomResult interval_freedom_check(const SetSpec& s, std::size_t fold) {
  s.validate();
  const auto combos = fold_combinations(s.components.size(), fold);
  if (combos.size() > 2'000'000) throw BudgetExceeded("too many fold combinations for the freedom check");
  FreedomResult best;
  bool have = false;
  for (const auto& c : combos) {
    DigitPattern p = s.components[c[0]];
    for (std::size_t t = 1; t < c.size(); ++t) p = p | s.components[c[t]];
    std::size_t last_zero = 0;
    for (std::size_t pos = s.depth; pos >= 1; --pos)
      if (!p.is_free(pos)) {
        last_zero = pos;
        break;
      }
    if (!have || last_zero < best.j0) {
      best.j0 = last_zero;
      best.combination = c;
      have = true;
    }
  }
  if (best.j0 == 0) {
    best.holds = true;
  } else if (s.scales.size() >= 2) {
    // the free tail must contain a whole schedule cycle of complete blocks
    std::size_t need = 1;
    if (s.params.contains("period")) need = s.params["period"].get<std::size_t>();
    std::size_t complete = 0;
    for (std::size_t k = 0; k + 1 < s.scales.size(); ++k)
      if (s.scales[k] > best.j0 && s.scales[k + 1] - 1 <= s.depth) ++complete;
    best.holds = complete >= need;
  } else {
    best.holds = best.j0 < s.depth;
  }
  return best;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceEntry>& entries, const std::vector<std::string>& header) {
  for (const auto& h : header) out << "# " << h << '\n';
  out << "j,fold,lower,upper,exp_lower,exp_upper,predicted,mode\n";
  for (const auto& e : entries)
    out << e.j << ',' << e.fold << ',' << to_string(e.lower) << ',' << to_string(e.upper) << ','
        << format_double(e.exp_lower) << ',' << format_double(e.exp_upper) << ',' << format_double(e.predicted) << ','
        << to_string(e.mode) << '\n';
}

void write_off_csv(std::ostream& out, const std::vector<OffEntry>& entries, const std::vector<std::string>& header) {
  for (const auto& h : header) out << "# " << h << '\n';
  out << "n,off,off_exact,running_min\n";
  for (const auto& e : entries)
    out << e.n << ',' << format_double(e.off.get_d()) << ',' << to_string(e.off) << ','
        << format_double(e.running_min.get_d()) << '\n';
}

}  // namespace sumlab
