#include "sumlab/automaton.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <unordered_map>

#include "sumlab/errors.hpp"

namespace sumlab {

namespace {

using Bits = std::vector<std::uint64_t>;

struct BitsHash {
  std::size_t operator()(const Bits& b) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ b.size();
    for (std::uint64_t w : b) {
      h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 0xff51afd7ed558ccdULL;
    }
    return static_cast<std::size_t>(h ^ (h >> 33));
  }
};

bool any(const std::uint64_t* p, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (p[i]) return true;
  return false;
}

// Positions grouped by which components are Free there.
struct Columns {
  std::vector<std::uint32_t> cls;                 // cls[pos-1]
  std::vector<std::vector<std::uint8_t>> free;    // free[class][component]
};

Columns build_columns(const SetSpec& s, std::size_t upto) {
  Columns c;
  std::map<std::vector<std::uint8_t>, std::uint32_t> ids;
  c.cls.resize(upto);
  std::vector<std::uint8_t> sig(s.components.size());
  for (std::size_t pos = 1; pos <= upto; ++pos) {
    for (std::size_t i = 0; i < s.components.size(); ++i) sig[i] = s.components[i].is_free(pos);
    auto [it, fresh] = ids.try_emplace(sig, static_cast<std::uint32_t>(c.free.size()));
    if (fresh) c.free.push_back(sig);
    c.cls[pos - 1] = it->second;
  }
  return c;
}

struct BudgetHit {};

// Subset construction over atoms (combination, pending carry e). Reading the
// output word most significant digit first, with a leading top value T, the
// pending carry after position i is e_i = 2 e_{i-1} + o_i - b_i where b_i is
// the addend digit sum at i; a word is a start when e_j = 0 is reachable and
// lies in the width-l union when any e_j is reachable.
class CarryEngine {
 public:
  CarryEngine(const Columns& cols, std::size_t fold, const std::vector<std::vector<std::uint8_t>>& profiles,
              std::size_t budget)
      : cols_(cols), fold_(fold), budget_(budget) {
    ncombo_ = profiles.size();
    words_ = (ncombo_ + 63) / 64;
    const std::size_t ncls = cols.free.size();
    ge_.assign(ncls * (fold + 1), Bits(words_, 0));
    for (std::size_t c = 0; c < ncls; ++c)
      for (std::size_t k = 0; k < ncombo_; ++k)
        for (std::size_t b = 0; b <= profiles[k][c]; ++b) ge_[c * (fold + 1) + b][k / 64] |= std::uint64_t{1} << (k % 64);
  }

  std::size_t states() const { return states_.size(); }

  // Returns per requested scale (ascending) the pair (starts, cells).
  std::vector<std::pair<BigInt, BigInt>> run(const std::vector<std::size_t>& scales, std::size_t& widest) {
    std::vector<std::pair<BigInt, BigInt>> out;
    if (scales.empty()) return out;
    std::vector<std::pair<std::uint32_t, BigInt>> layer;
    for (std::size_t t = 0; t < fold_; ++t) {
      Bits init(fold_ * words_, 0);
      for (std::size_t k = 0; k < ncombo_; ++k) init[t * words_ + k / 64] |= std::uint64_t{1} << (k % 64);
      layer.emplace_back(intern(std::move(init)), BigInt(1));
    }
    std::unordered_map<std::uint32_t, std::size_t> slot;
    std::vector<std::pair<std::uint32_t, BigInt>> next;
    std::size_t si = 0;
    const std::size_t last = scales.back();
    for (std::size_t pos = 1; pos <= last; ++pos) {
      const std::uint32_t c = cols_.cls[pos - 1];
      next.clear();
      slot.clear();
      for (const auto& [id, cnt] : layer) {
        for (int o = 0; o < 2; ++o) {
          const std::int64_t to = step(id, c, o);
          if (to < 0) continue;
          auto [it, fresh] = slot.try_emplace(static_cast<std::uint32_t>(to), next.size());
          if (fresh)
            next.emplace_back(static_cast<std::uint32_t>(to), cnt);
          else
            next[it->second].second += cnt;
        }
      }
      layer.swap(next);
      widest = std::max(widest, layer.size());
      while (si < scales.size() && scales[si] == pos) {
        BigInt starts = 0, cells = 0;
        for (const auto& [id, cnt] : layer) {
          cells += cnt;
          if (has_zero_[id]) starts += cnt;
        }
        out.emplace_back(starts, cells);
        ++si;
      }
    }
    return out;
  }

 private:
  std::uint32_t intern(Bits&& b) {
    auto it = ids_.find(b);
    if (it != ids_.end()) return it->second;
    if (states_.size() >= budget_) throw BudgetHit{};
    const auto id = static_cast<std::uint32_t>(states_.size());
    has_zero_.push_back(any(b.data(), words_));
    states_.push_back(b);
    ids_.emplace(std::move(b), id);
    return id;
  }

  std::int64_t step(std::uint32_t id, std::uint32_t cls, int o) {
    const std::uint64_t key = (std::uint64_t{id} << 32) | (std::uint64_t{cls} << 1) | static_cast<std::uint64_t>(o);
    if (auto it = trans_.find(key); it != trans_.end()) return it->second;
    Bits nb(fold_ * words_, 0);
    const Bits& cur = states_[id];
    const std::int64_t l = static_cast<std::int64_t>(fold_);
    for (std::int64_t e = 0; e < l; ++e) {
      const std::uint64_t* src = cur.data() + e * words_;
      if (!any(src, words_)) continue;
      for (std::int64_t e2 = 0; e2 < l; ++e2) {
        const std::int64_t b = 2 * e + o - e2;
        if (b < 0 || b > l) continue;
        const Bits& g = ge_[cls * (fold_ + 1) + static_cast<std::size_t>(b)];
        std::uint64_t* dst = nb.data() + e2 * words_;
        for (std::size_t w = 0; w < words_; ++w) dst[w] |= src[w] & g[w];
      }
    }
    std::int64_t result = -1;
    if (any(nb.data(), nb.size())) result = intern(std::move(nb));
    trans_.emplace(key, result);
    return result;
  }

  const Columns& cols_;
  std::size_t fold_;
  std::size_t budget_;
  std::size_t ncombo_ = 0;
  std::size_t words_ = 0;
  std::vector<Bits> ge_;  // [class][b]: combinations with at least b free addends
  std::vector<Bits> states_;
  std::vector<char> has_zero_;
  std::unordered_map<Bits, std::uint32_t, BitsHash> ids_;
  std::unordered_map<std::uint64_t, std::int64_t> trans_;
};

std::vector<std::size_t> sorted_scales(const std::vector<std::size_t>& scales, std::size_t depth) {
  std::vector<std::size_t> v = scales;
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  for (std::size_t j : v) {
    if (j == 0) throw ScaleError("scale j must be at least 1");
    if (j > depth) throw ScaleError("scale " + std::to_string(j) + " exceeds depth " + std::to_string(depth));
  }
  return v;
}

// Column profiles of each addend combination, deduplicated.
std::vector<std::vector<std::uint8_t>> combination_profiles(const Columns& cols, std::size_t m, std::size_t fold) {
  std::vector<std::vector<std::uint8_t>> out;
  std::map<std::vector<std::uint8_t>, bool> seen;
  for (const auto& combo : fold_combinations(m, fold)) {
    std::vector<std::uint8_t> prof(cols.free.size(), 0);
    for (std::size_t c = 0; c < cols.free.size(); ++c)
      for (std::size_t idx : combo) prof[c] += cols.free[c][idx];
    if (seen.emplace(prof, true).second) out.push_back(std::move(prof));
  }
  return out;
}

}  // namespace

const char* to_string(CountMode m) { return m == CountMode::exact ? "exact" : "bracket"; }

CountMode parse_count_mode(std::string_view text) {
  if (text == "exact") return CountMode::exact;
  if (text == "bracket") return CountMode::bracket;
  throw ConfigError("mode must be exact or bracket, got '" + std::string(text) + "'");
}

const ScaleCount& DistinctCountResult::at(std::size_t j) const {
  for (const auto& sc : scales)
    if (sc.j == j) return sc;
  throw ScaleError("scale " + std::to_string(j) + " was not computed");
}

std::vector<std::vector<std::size_t>> fold_combinations(std::size_t m, std::size_t fold) {
  std::vector<std::vector<std::size_t>> out;
  if (m == 0 || fold == 0) return out;
  std::vector<std::size_t> cur(fold, 0);
  while (true) {
    out.push_back(cur);
    std::size_t i = fold;
    while (i > 0 && cur[i - 1] == m - 1) --i;
    if (i == 0) break;
    ++cur[i - 1];
    for (std::size_t r = i; r < fold; ++r) cur[r] = cur[i - 1];
  }
  return out;
}

std::vector<BigInt> prefix_counts(const SetSpec& s, const std::vector<std::size_t>& scales) {
  s.validate();
  auto v = sorted_scales(scales, s.depth);
  if (v.empty()) return {};
  Columns cols = build_columns(s, v.back());
  auto profiles = combination_profiles(cols, s.components.size(), 1);
  CarryEngine eng(cols, 1, profiles, static_cast<std::size_t>(-1));
  std::size_t widest = 0;
  auto res = eng.run(v, widest);
  std::vector<BigInt> out;
  for (std::size_t j : scales) {
    auto idx = static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), j) - v.begin());
    out.push_back(res[idx].first);
  }
  return out;
}

CellCountBracket prefix_count(const SetSpec& s, std::size_t j) {
  BigInt n = prefix_counts(s, {j}).front();
  return {n, n};
}

DistinctCountResult sum_prefix_cover(const SetSpec& s, std::size_t fold, const std::vector<std::size_t>& scales,
                                     CountMode mode, const EngineOptions& options) {
  s.validate();
  if (fold == 0) throw ConfigError("fold must be at least 1");
  DistinctCountResult r;
  r.fold = fold;
  r.requested = mode;
  auto v = sorted_scales(scales, s.depth);
  if (v.empty()) return r;
  Columns cols = build_columns(s, v.back());
  auto profiles = combination_profiles(cols, s.components.size(), fold);
  r.combinations = profiles.size();

  if (mode == CountMode::exact) {
    try {
      CarryEngine eng(cols, fold, profiles, options.state_budget);
      auto res = eng.run(v, r.widest_layer);
      r.used = CountMode::exact;
      r.states = eng.states();
      for (std::size_t i = 0; i < v.size(); ++i)
        r.scales.push_back({v[i], {res[i].first, res[i].first}, {res[i].second, res[i].second}});
      return r;
    } catch (const BudgetHit&) {
      r.fell_back = true;
      r.widest_layer = 0;
    }
  }

  r.used = CountMode::bracket;
  r.scales.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r.scales[i].j = v[i];
  for (const auto& prof : profiles) {
    CarryEngine eng(cols, fold, {prof}, static_cast<std::size_t>(-1));
    std::size_t widest = 0;
    auto res = eng.run(v, widest);
    r.states += eng.states();
    r.widest_layer = std::max(r.widest_layer, widest);
    for (std::size_t i = 0; i < v.size(); ++i) {
      auto& sc = r.scales[i];
      if (res[i].first > sc.starts.lower) sc.starts.lower = res[i].first;
      sc.starts.upper += res[i].first;
      if (res[i].second > sc.cells.lower) sc.cells.lower = res[i].second;
      sc.cells.upper += res[i].second;
    }
  }
  return r;
}

CellCountBracket sum_prefix_cover(const SetSpec& s, std::size_t fold, std::size_t j, CountMode mode,
                                  const EngineOptions& options) {
  return sum_prefix_cover(s, fold, std::vector<std::size_t>{j}, mode, options).scales.front().starts;
}

BigInt enumeration_size(const SetSpec& s, std::size_t fold, std::size_t j) {
  s.validate();
  if (j > s.depth) throw ScaleError("scale exceeds depth");
  BigInt total = 0;
  for (const auto& combo : fold_combinations(s.components.size(), fold)) {
    std::size_t bits = 0;
    for (std::size_t idx : combo) bits += s.components[idx].count_free(j);
    total += pow2(bits);
  }
  return total;
}

OracleResult brute_force_oracle(const SetSpec& s, std::size_t fold, std::size_t j, const BigInt& budget) {
  s.validate();
  if (fold == 0) throw ConfigError("fold must be at least 1");
  if (j == 0 || j > s.depth) throw ScaleError("oracle scale out of range");
  if (j > 56) throw BudgetExceeded("oracle works on 64-bit prefixes; scale " + std::to_string(j) + " is too deep");
  const BigInt size = enumeration_size(s, fold, j);
  if (size > budget)
    throw BudgetExceeded("oracle enumeration size " + to_string(size) + " exceeds budget " + to_string(budget));

  // every depth-j prefix value of each component
  std::vector<std::vector<std::uint64_t>> values;
  for (const auto& c : s.components) {
    std::vector<std::uint64_t> v{0};
    for (std::size_t pos = 1; pos <= j; ++pos) {
      if (!c.is_free(pos)) continue;
      const std::uint64_t w = std::uint64_t{1} << (j - pos);
      const std::size_t n = v.size();
      for (std::size_t i = 0; i < n; ++i) v.push_back(v[i] + w);
    }
    values.push_back(std::move(v));
  }

  std::vector<std::uint64_t> all;
  for (const auto& combo : fold_combinations(s.components.size(), fold)) {
    // odometer over one prefix per addend
    std::vector<std::size_t> at(fold, 0);
    while (true) {
      std::uint64_t sum = 0;
      for (std::size_t t = 0; t < fold; ++t) sum += values[combo[t]][at[t]];
      all.push_back(sum);
      std::size_t t = 0;
      while (t < fold && ++at[t] == values[combo[t]].size()) at[t++] = 0;
      if (t == fold) break;
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
  }

  OracleResult r;
  r.starts = static_cast<unsigned long>(all.size());
  std::uint64_t covered = 0;  // one past the last cell counted
  std::uint64_t cells = 0;
  for (std::uint64_t st : all) {
    const std::uint64_t end = st + fold;
    const std::uint64_t from = std::max(st, covered);
    if (end > from) cells += end - from;
    covered = std::max(covered, end);
  }
  r.cells = static_cast<unsigned long>(cells);
  return r;
}

std::vector<Rational> branching_min_averages(const SetSpec& s, const std::vector<std::size_t>& ns) {
  s.validate();
  auto v = sorted_scales(ns, s.depth);
  std::vector<Rational> out;
  if (v.empty()) return out;
  const std::size_t m = s.components.size();
  const std::size_t words = (m + 63) / 64;

  // alive-component subsets; digit 0 keeps S, digit 1 keeps S ∩ Free(pos)
  std::unordered_map<Bits, std::size_t, BitsHash> dist, next;
  Bits all(words, 0);
  for (std::size_t k = 0; k < m; ++k) all[k / 64] |= std::uint64_t{1} << (k % 64);
  dist.emplace(all, 0);
  std::vector<std::size_t> minima;
  std::size_t si = 0;
  Bits fr(words);
  for (std::size_t pos = 1; pos <= v.back(); ++pos) {
    std::fill(fr.begin(), fr.end(), 0);
    for (std::size_t k = 0; k < m; ++k)
      if (s.components[k].is_free(pos)) fr[k / 64] |= std::uint64_t{1} << (k % 64);
    next.clear();
    for (const auto& [S, d] : dist) {
      Bits one(words);
      for (std::size_t w = 0; w < words; ++w) one[w] = S[w] & fr[w];
      const bool branches = any(one.data(), words);
      const std::size_t nd = d + (branches ? 1 : 0);
      auto relax = [&](const Bits& t) {
        auto [it, fresh] = next.try_emplace(t, nd);
        if (!fresh) it->second = std::min(it->second, nd);
      };
      relax(S);
      if (branches) relax(one);
    }
    dist.swap(next);
    if (si < v.size() && v[si] == pos) {
      std::size_t best = static_cast<std::size_t>(-1);
      for (const auto& [S, d] : dist) best = std::min(best, d);
      minima.push_back(best);
      ++si;
    }
  }
  for (std::size_t n : ns) {
    auto idx = static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), n) - v.begin());
    out.emplace_back(Rational(static_cast<unsigned long>(minima[idx]), static_cast<unsigned long>(n)));
    out.back().canonicalize();
  }
  return out;
}

Rational branching_min_average(const SetSpec& s, std::size_t n) { return branching_min_averages(s, {n}).front(); }

}  // namespace sumlab
