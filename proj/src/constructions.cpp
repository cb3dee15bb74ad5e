#include "sumlab/constructions.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "sumlab/errors.hpp"

namespace sumlab {

namespace {

constexpr std::size_t kMaxDepth = std::size_t{1} << 26;

const Rational& entry(const std::vector<Rational>& v, std::size_t i, const char* name) {
  if (i == 0 || i > v.size())
    throw ConfigError(std::string("target sequence ") + name + " needs at least " + std::to_string(i) + " entries");
  return v[i - 1];
}

std::size_t floor_times(std::size_t k, const Rational& x) {
  return static_cast<std::size_t>(to_u64(floor_of(Rational(static_cast<unsigned long>(k)) * x)));
}

std::vector<std::string> to_strings(const std::vector<Rational>& v) {
  std::vector<std::string> out;
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

nlohmann::json targets_json(const DimensionTargets& t) {
  return {{"alpha", to_strings(t.alpha)}, {"beta", to_strings(t.beta)}, {"gamma", to_strings(t.gamma)}};
}

std::size_t aligned_block_count(const ScaleSequence& scales, std::optional<std::size_t> depth) {
  if (scales.horizon() < 2) throw ConstructionError("scale sequence needs at least two values");
  if (!depth) return scales.horizon() - 1;
  for (std::size_t k = 1; k <= scales.horizon(); ++k)
    if (scales.at(k) - 1 == *depth) {
      if (*depth == 0) break;
      return k - 1;
    }
  throw ConstructionError("depth " + std::to_string(*depth) + " is not aligned to a scale boundary n_k - 1");
}

void require_admissible(const DimensionTargets& t, std::size_t fold) {
  auto rep = validate_targets(t, fold);
  if (!rep.ok) throw AdmissibilityError(rep.violations.front().constraint, rep.violations.front().detail);
}

struct RowSpec {
  std::map<std::size_t, std::size_t> zero_at;  // phase -> alpha index
};

SetSpec build_interval_zero(Example ex, const DimensionTargets& t, const ScaleSequence& scales,
                            std::optional<std::size_t> depth) {
  const bool pair = ex == Example::pair_hausdorff;
  const std::size_t period = pair ? 3 : 6;
  std::vector<RowSpec> rows;
  if (pair) {
    entry(t.alpha, 2, "alpha");
    require_admissible({t.alpha, {}, {}}, 2);
    rows.push_back({{{0, 1}, {2, 2}}});
    if (t.alpha[1] != 0) rows.push_back({{{1, 1}, {2, 2}}});
  } else {
    entry(t.alpha, 3, "alpha");
    require_admissible({t.alpha, {}, {}}, 3);
    rows.push_back({{{0, 1}, {2, 2}, {4, 2}, {5, 3}}});
    rows.push_back({{{1, 1}, {2, 2}, {3, 2}, {5, 3}}});
    rows.push_back({{{0, 1}, {3, 2}, {4, 2}, {5, 3}}});
  }
  const std::size_t blocks = aligned_block_count(scales, depth);
  SetSpec s;
  s.construction = to_string(ex);
  s.depth = scales.at(blocks + 1) - 1;
  if (s.depth == 0 || s.depth > kMaxDepth) throw ConstructionError("depth out of supported range");
  s.scales = std::vector<std::size_t>(scales.values().begin(), scales.values().begin() + blocks + 1);
  for (std::size_t c = 0; c < rows.size(); ++c) {
    DigitPattern p(s.depth, Symbol::Free);
    std::vector<std::string> sched;
    for (std::size_t i = 1; i <= blocks; ++i) {
      auto it = rows[c].zero_at.find(i % period);
      if (it == rows[c].zero_at.end()) {
        sched.push_back("free");
        continue;
      }
      const std::size_t j = it->second;
      const std::string kind = "alpha" + std::to_string(j);
      sched.push_back("zero(" + kind + ")");
      const std::size_t ni = scales.at(i), next = scales.at(i + 1);
      const Rational& a = t.alpha[j - 1];
      std::size_t end = a == 0 ? i * ni : static_cast<std::size_t>(to_u64(floor_of(Rational(static_cast<unsigned long>(ni)) / a)));
      end = std::min(end, next);
      for (std::size_t pos = ni; pos < end; ++pos) p.set(pos, Symbol::Zero);
      if (end > ni) s.zero_runs.push_back({ni, end - 1, i, c, kind});
    }
    s.components.push_back(std::move(p));
    s.schedule.push_back(std::move(sched));
  }
  s.params = {{"targets", targets_json(t)}, {"scales", s.scales}, {"depth", s.depth}, {"period", period}};
  return s;
}

}  // namespace

// ---------------------------------------------------------------- scales

ScaleSequence ScaleSequence::from_values(std::vector<std::size_t> n) {
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] == 0) throw ConstructionError("scale values must be positive");
    if (i == 0) continue;
    if (n[i] <= n[i - 1]) throw ConstructionError("scale sequence must be strictly increasing");
    const std::size_t k = i;  // n[i] = n_{k+1}
    if ((n[i] - n[i - 1]) % k != 0)
      throw ConstructionError("n_" + std::to_string(k + 1) + " - n_" + std::to_string(k) + " = " +
                              std::to_string(n[i] - n[i - 1]) + " is not divisible by " + std::to_string(k));
  }
  ScaleSequence s;
  s.n_ = std::move(n);
  return s;
}

std::size_t ScaleSequence::at(std::size_t k) const {
  if (k == 0 || k > n_.size()) throw ConstructionError("scale index " + std::to_string(k) + " out of horizon");
  return n_[k - 1];
}

std::size_t ScaleSequence::gap(std::size_t k) const { return at(k + 1) - at(k); }

ScalePolicy parse_scale_policy(std::string_view text) {
  if (text == "paper") return ScalePolicy::paper;
  if (text == "scaled") return ScalePolicy::scaled;
  throw ConfigError("scale policy must be paper or scaled");
}

ScaleSequence make_scale_sequence(ScalePolicy policy, std::size_t horizon, std::size_t base) {
  if (horizon < 2) throw ConfigError("scale horizon must be at least 2");
  std::vector<std::size_t> n;
  if (policy == ScalePolicy::paper) {
    if (horizon > 5)
      throw ConfigError("the doubly exponential policy overflows beyond K = 5 (n_6 >= 2^64); use the scaled policy");
    for (std::size_t k = 1; k <= horizon; ++k) {
      std::size_t v = std::size_t{1} << (std::size_t{1} << k);
      if (k >= 2)
        while ((v - n.back()) % (k - 1) != 0) ++v;
      n.push_back(v);
    }
  } else {
    if (base < 2) throw ConfigError("scaled policy base must be at least 2");
    n.push_back(base);
    for (std::size_t k = 2; k <= horizon; ++k) {
      if (n.back() > (std::size_t{1} << 40) / base) throw ConfigError("scaled sequence overflows; lower the horizon");
      std::size_t v = base * n.back();
      while ((v - n.back()) % (k - 1) != 0) ++v;
      n.push_back(v);
    }
  }
  return ScaleSequence::from_values(std::move(n));
}

std::size_t star_floor(std::size_t n, const Rational& alpha, std::size_t gap, std::size_t i) {
  if (alpha < 0 || alpha > 1) throw ConfigError("star_floor needs 0 <= alpha <= 1");
  if (alpha == 0) return i * n;
  const auto f = static_cast<std::size_t>(to_u64(floor_of(Rational(static_cast<unsigned long>(n)) / alpha)));
  return std::min(f, gap);
}

// ---------------------------------------------------------------- blocks

BlockParams block_params(std::size_t k, const DimensionTargets& t, const ScaleSequence& scales, DelayVariant variant,
                         FloorPolicy policy) {
  if (k == 0) throw ConstructionError("block index starts at 1");
  BlockParams bp;
  bp.k = k;
  const std::size_t nk = scales.at(k);
  if (t.beta.size() >= 1) bp.l = floor_times(k, t.beta[0]);
  if (t.beta.size() >= 2) bp.m = floor_times(k, t.beta[1]);
  if (t.beta.size() >= 3) bp.s = floor_times(k, t.beta[2]);
  if (t.gamma.size() >= 1) bp.p = floor_times(k, t.gamma[0]);
  if (t.gamma.size() >= 2) bp.q = floor_times(k, t.gamma[1]);
  if (t.gamma.size() >= 3) bp.v = floor_times(k, t.gamma[2]);

  const auto& top = variant == DelayVariant::lowbox ? t.beta : t.gamma;
  for (std::size_t i = 1; i <= std::min<std::size_t>(3, t.alpha.size()); ++i) {
    const Rational& a = t.alpha[i - 1];
    if (a == 0) {
      bp.d[i - 1] = k * nk;
    } else {
      const Rational& hi = entry(top, i, variant == DelayVariant::lowbox ? "beta" : "gamma");
      Rational x = Rational(static_cast<unsigned long>(nk)) * (hi / a - 1) / static_cast<unsigned long>(k);
      bp.d[i - 1] = k * static_cast<std::size_t>(to_u64(floor_of(x)));
    }
  }

  auto fail = [&](const std::string& name, std::size_t lhs, std::size_t rhs) {
    throw AdmissibilityError(name, "k = " + std::to_string(k) + ": " + std::to_string(lhs) + " > " + std::to_string(rhs));
  };
  if (t.beta.size() >= 2 && bp.l > bp.m) fail("l_k ≤ m_k", bp.l, bp.m);
  if (t.gamma.size() >= 2 && bp.p > bp.q) fail("p_k ≤ q_k", bp.p, bp.q);
  if (t.beta.size() >= 3) {
    if (bp.m > bp.s) fail("m_k ≤ s_k", bp.m, bp.s);
    if (bp.s > bp.l + bp.m) {
      if (policy == FloorPolicy::strict) fail("s_k ≤ l_k + m_k", bp.s, bp.l + bp.m);
      bp.s = bp.l + bp.m;
      bp.clamped = true;
    }
  }
  if (t.gamma.size() >= 3) {
    if (bp.q > bp.v) fail("q_k ≤ v_k", bp.q, bp.v);
    if (bp.v > bp.p + bp.q) {
      if (policy == FloorPolicy::strict) fail("v_k ≤ p_k + q_k", bp.v, bp.p + bp.q);
      bp.v = bp.p + bp.q;
      bp.clamped = true;
    }
  }
  return bp;
}

std::string BlockKind::name() const {
  static const char* fam[] = {"alpha", "beta", "gamma"};
  return fam[static_cast<int>(family)] + std::to_string(index);
}

BlockKind BlockKind::parse(std::string_view text) {
  BlockKind b;
  std::string_view head;
  if (text.size() >= 2) {
    head = text.substr(0, text.size() - 1);
    const char d = text.back();
    if (d < '1' || d > '3') throw ConfigError("block kind index must be 1..3: " + std::string(text));
    b.index = d - '0';
  }
  if (head == "alpha" || head == "a" || head == "α") b.family = Family::alpha;
  else if (head == "beta" || head == "b" || head == "β") b.family = Family::beta;
  else if (head == "gamma" || head == "g" || head == "γ") b.family = Family::gamma;
  else throw ConfigError("unknown block kind '" + std::string(text) + "'");
  return b;
}

BlockKind BlockKind::specular() const {
  BlockKind b = *this;
  if (index == 1) b.index = 2;
  else if (index == 2) b.index = 1;
  return b;
}

DigitPattern chunk_template(const BlockKind& kind, const BlockParams& bp) {
  const std::size_t k = bp.k;
  DigitPattern c;
  auto zeros = [&](std::size_t n) { c.append(Symbol::Zero, n); };
  auto frees = [&](std::size_t n) { c.append(Symbol::Free, n); };
  const bool g = kind.family == Family::gamma;
  const std::size_t lo = g ? bp.p : bp.l;
  const std::size_t mid = g ? bp.q : bp.m;
  const std::size_t hi = g ? bp.v : bp.s;
  switch (kind.index) {
    case 1:
      frees(lo);
      zeros(k - lo);
      break;
    case 2:
      zeros(mid - lo);
      frees(lo);
      zeros(k - mid);
      break;
    case 3:
      zeros(mid - lo);
      frees(lo + mid - hi);
      zeros(hi - mid);
      frees(hi - mid);
      zeros(k - hi);
      break;
    default:
      throw InvariantViolation("block kind index out of range");
  }
  if (c.size() != k) throw InvariantViolation("chunk template length differs from k");
  return c;
}

DigitPattern make_block(const BlockKind& kind, std::size_t k, const BlockParams& bp, const ScaleSequence& scales) {
  if (bp.k != k) throw InvariantViolation("block parameters computed for a different k");
  const std::size_t gap = scales.gap(k);
  if (gap % k != 0)
    throw ConstructionError("block " + std::to_string(k) + ": gap " + std::to_string(gap) + " not divisible by k");
  const DigitPattern chunk = chunk_template(kind, bp);
  if (kind.family != Family::alpha) return chunk.repeated(gap / k);
  const std::size_t d = bp.d[kind.index - 1];
  if (d >= gap) return DigitPattern(gap, Symbol::Zero);
  if ((gap - d) % k != 0) throw ConstructionError("block " + std::to_string(k) + ": gap - d not divisible by k");
  DigitPattern out(d, Symbol::Zero);
  out.append(chunk.repeated((gap - d) / k));
  return out;
}

// ---------------------------------------------------------------- schedules

namespace {

ScheduleTable table_from_text(const std::vector<std::string>& rows) {
  ScheduleTable t;
  for (const auto& r : rows) {
    std::istringstream in(r);
    std::vector<BlockKind> row;
    for (std::string tok; in >> tok;) row.push_back(BlockKind::parse(tok));
    t.rows.push_back(std::move(row));
  }
  t.period = t.rows.front().size();
  return t;
}

ScheduleTable with_specular(std::vector<std::string> rows) {
  ScheduleTable t = table_from_text(rows);
  const std::size_t half = t.rows.size();
  for (std::size_t i = 0; i < half; ++i) {
    std::vector<BlockKind> r;
    for (const auto& b : t.rows[i]) r.push_back(b.specular());
    t.rows.push_back(std::move(r));
  }
  return t;
}

}  // namespace

ScheduleTable schedule_haus_lowbox() { return with_specular({"a1 a2 b1", "b1 a1 a2", "a2 b1 a1"}); }

ScheduleTable schedule_all_dims_2() {
  return with_specular({"g1 a1 g2 a2 g1 b1", "g1 b1 g1 a1 g2 a2", "g2 a2 g1 b1 g1 a1"});
}

const std::vector<std::string>& all_dims_3_table_text() {
  static const std::vector<std::string> rows = {
      "g1 a1 g2 a2 g3 a3 g1 a1 g2 a2 g3 b1",
      "g1 a1 g2 a2 g3 a3 g1 a1 g2 b1 g3 a3",
      "g1 a1 g2 a2 g3 a3 g1 b1 g2 a2 g3 a3",
      "g1 a1 g2 a2 g3 b1 g1 a1 g2 a2 g3 a3",
      "g1 a1 g2 b1 g3 a3 g1 a1 g2 a2 g3 a3",
      "g1 b1 g2 a2 g3 a3 g1 a1 g2 a2 g3 a3",
      "g2 a2 g3 a3 g1 a1 g3 a3 g1 a1 g2 b2",
      "g2 a2 g3 a3 g1 a1 g3 a3 g1 b2 g2 a2",
      "g2 a2 g3 a3 g1 a1 g3 b2 g1 a1 g2 a2",
      "g2 a2 g3 a3 g1 b2 g3 a3 g1 a1 g2 a2",
      "g2 a2 g3 b2 g1 a1 g3 a3 g1 a1 g2 a2",
      "g2 b2 g3 a3 g1 a1 g3 a3 g1 a1 g2 a2",
      "g3 a3 g1 a1 g2 a2 g2 a2 g3 a3 g1 b3",
      "g3 a3 g1 a1 g2 a2 g2 a2 g3 b3 g1 a1",
      "g3 a3 g1 a1 g2 a2 g2 b3 g3 a3 g1 a1",
      "g3 a3 g1 a1 g2 b3 g2 a2 g3 a3 g1 a1",
      "g3 a3 g1 b3 g2 a2 g2 a2 g3 a3 g1 a1",
      "g3 b3 g1 a1 g2 a2 g2 a2 g3 a3 g1 a1",
  };
  return rows;
}

ScheduleTable schedule_all_dims_3() { return table_from_text(all_dims_3_table_text()); }

std::string to_string(Example e) {
  switch (e) {
    case Example::pair_hausdorff: return "pair-hausdorff";
    case Example::triple_hausdorff: return "triple-hausdorff";
    case Example::haus_lowbox: return "haus-lowbox";
    case Example::all_dims_2: return "all-dims-2";
    case Example::all_dims_3: return "all-dims-3";
  }
  return "?";
}

Example parse_example(std::string_view text) {
  for (Example e : {Example::pair_hausdorff, Example::triple_hausdorff, Example::haus_lowbox, Example::all_dims_2,
                    Example::all_dims_3})
    if (to_string(e) == text) return e;
  throw ConfigError("unknown construction '" + std::string(text) + "'");
}

SetSpec build_example(Example ex, const DimensionTargets& t, const ScaleSequence& scales,
                      std::optional<std::size_t> depth, FloorPolicy policy) {
  if (ex == Example::pair_hausdorff || ex == Example::triple_hausdorff) return build_interval_zero(ex, t, scales, depth);

  ScheduleTable table;
  DelayVariant variant = DelayVariant::full;
  std::size_t fold = 2;
  switch (ex) {
    case Example::haus_lowbox:
      table = schedule_haus_lowbox();
      variant = DelayVariant::lowbox;
      entry(t.alpha, 2, "alpha");
      entry(t.beta, 2, "beta");
      break;
    case Example::all_dims_2:
      table = schedule_all_dims_2();
      entry(t.alpha, 2, "alpha");
      entry(t.beta, 2, "beta");
      entry(t.gamma, 2, "gamma");
      break;
    default:
      table = schedule_all_dims_3();
      fold = 3;
      entry(t.alpha, 3, "alpha");
      entry(t.beta, 3, "beta");
      entry(t.gamma, 3, "gamma");
      break;
  }
  // only the indices the example uses take part in the hypotheses
  DimensionTargets used;
  if (variant == DelayVariant::lowbox) {
    used = {std::vector<Rational>(t.alpha.begin(), t.alpha.begin() + fold),
            std::vector<Rational>(t.beta.begin(), t.beta.begin() + fold), {}};
  } else {
    used = {std::vector<Rational>(t.alpha.begin(), t.alpha.begin() + fold),
            std::vector<Rational>(t.beta.begin(), t.beta.begin() + fold),
            std::vector<Rational>(t.gamma.begin(), t.gamma.begin() + fold)};
  }
  require_admissible(used, fold);

  const std::size_t blocks = aligned_block_count(scales, depth);
  SetSpec s;
  s.construction = to_string(ex);
  s.depth = scales.at(blocks + 1) - 1;
  if (s.depth == 0 || s.depth > kMaxDepth) throw ConstructionError("depth out of supported range");
  s.scales = std::vector<std::size_t>(scales.values().begin(), scales.values().begin() + blocks + 1);

  std::vector<BlockParams> params;
  std::vector<std::size_t> clamped;
  for (std::size_t k = 1; k <= blocks; ++k) {
    params.push_back(block_params(k, used, scales, variant, policy));
    if (params.back().clamped) clamped.push_back(k);
  }
  std::map<std::pair<std::string, std::size_t>, DigitPattern> cache;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    DigitPattern p(scales.at(1) - 1, Symbol::Free);
    std::vector<std::string> sched;
    for (std::size_t k = 1; k <= blocks; ++k) {
      const BlockKind& kind = table.at(r, k);
      sched.push_back(kind.name());
      auto key = std::make_pair(kind.name(), k);
      auto it = cache.find(key);
      if (it == cache.end()) it = cache.emplace(key, make_block(kind, k, params[k - 1], scales)).first;
      p.append(it->second);
      if (kind.family == Family::alpha) {
        const std::size_t d = std::min(params[k - 1].d[kind.index - 1], scales.gap(k));
        if (d > 0) s.zero_runs.push_back({scales.at(k), scales.at(k) + d - 1, k, r, kind.name()});
      }
    }
    s.components.push_back(std::move(p));
    s.schedule.push_back(std::move(sched));
  }
  s.params = {{"targets", targets_json(used)},
              {"scales", s.scales},
              {"depth", s.depth},
              {"period", table.period},
              {"floor_policy", policy == FloorPolicy::strict ? "strict" : "clamp"},
              {"clamped_blocks", clamped}};
  s.validate();
  return s;
}

// ---------------------------------------------------------------- paste / interleave

std::vector<std::size_t> PastingPlan::offsets() const {
  std::vector<std::size_t> s{0};
  for (std::size_t i = 0; i + 1 < lengths.size(); ++i) s.push_back(s.back() + lengths[i]);
  return s;
}

SetSpec paste(const std::vector<SetSpec>& specs, const PastingPlan& plan, std::size_t max_components) {
  if (specs.empty() || specs.size() != plan.lengths.size())
    throw ConstructionError("paste needs one segment length per source spec");
  std::size_t total = 1;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    specs[i].validate();
    const std::size_t M = plan.lengths[i];
    if (M == 0) throw ConstructionError("segment lengths must be positive");
    if (M > specs[i].depth)
      throw ConstructionError("segment " + std::to_string(i + 1) + " longer than its source depth");
    if (!specs[i].scales.empty() && M != specs[i].depth) {
      auto b = specs[i].block_boundaries();
      if (std::find(b.begin(), b.end(), M) == b.end())
        throw ConstructionError("segment " + std::to_string(i + 1) + " length " + std::to_string(M) +
                                " is not aligned to a block boundary of its source");
    }
    total *= specs[i].components.size();
    if (total > max_components) throw ConstructionError("pasted spec would exceed the component cap");
  }
  const auto offs = plan.offsets();
  SetSpec out;
  out.construction = "paste";
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (i > 0) out.scales.push_back(offs[i] + 1);
    out.depth += plan.lengths[i];
  }
  std::vector<std::size_t> choice(specs.size(), 0);
  while (true) {
    DigitPattern p;
    for (std::size_t i = 0; i < specs.size(); ++i) p.append(specs[i].components[choice[i]].slice(1, plan.lengths[i]));
    const std::size_t comp = out.components.size();
    for (std::size_t i = 0; i < specs.size(); ++i)
      for (const auto& z : specs[i].zero_runs)
        if (z.component == choice[i] && z.first <= plan.lengths[i])
          out.zero_runs.push_back({z.first + offs[i], std::min(z.last, plan.lengths[i]) + offs[i], z.block, comp, z.kind});
    out.components.push_back(std::move(p));
    std::size_t i = specs.size();
    while (i > 0 && ++choice[i - 1] == specs[i - 1].components.size()) choice[--i] = 0;
    if (i == 0) break;
  }
  nlohmann::json src = nlohmann::json::array();
  for (const auto& s : specs) src.push_back({{"construction", s.construction}, {"params", s.params}});
  out.params = {{"lengths", plan.lengths}, {"sources", src}};
  out.validate();
  return out;
}

bool interleave_uses_first(std::size_t k, const std::vector<std::size_t>& M) {
  bool first = false;
  for (std::size_t i = 0; i < M.size(); ++i) {
    if (k < M[i]) break;
    first = (i % 2 == 0);
  }
  return first;
}

SetSpec interleave(const SetSpec& a, const SetSpec& b, const std::vector<std::size_t>& M) {
  a.validate();
  b.validate();
  if (a.scales != b.scales || a.scales.empty()) throw ConstructionError("interleave needs specs over the same scale sequence");
  if (a.depth != b.depth) throw ConstructionError("interleave needs specs of equal depth");
  if (a.components.size() != b.components.size())
    throw ConstructionError("interleave needs specs with the same number of components");
  if (M.empty()) throw ConstructionError("interleave needs at least one range boundary");
  for (std::size_t i = 1; i < M.size(); ++i)
    if (M[i] <= M[i - 1]) throw ConstructionError("interleave boundaries must be strictly increasing");

  SetSpec out;
  out.construction = "interleave";
  out.depth = a.depth;
  out.scales = a.scales;
  const std::size_t blocks = a.scales.size() - 1;
  for (std::size_t c = 0; c < a.components.size(); ++c) {
    const SetSpec& pre = interleave_uses_first(1, M) ? a : b;
    DigitPattern p = a.scales[0] > 1 ? pre.components[c].slice(1, a.scales[0] - 1) : DigitPattern();
    std::vector<std::string> sched;
    for (std::size_t k = 1; k <= blocks; ++k) {
      const SetSpec& src = interleave_uses_first(k, M) ? a : b;
      const std::size_t first = a.scales[k - 1];
      const std::size_t last = std::min(a.scales[k] - 1, a.depth);
      if (first > last) break;
      p.append(src.components[c].slice(first, last - first + 1));
      sched.push_back(c < src.schedule.size() && k - 1 < src.schedule[c].size() ? src.schedule[c][k - 1] : "");
      for (const auto& z : src.zero_runs)
        if (z.component == c && z.block == k) out.zero_runs.push_back(z);
    }
    out.components.push_back(std::move(p));
    out.schedule.push_back(std::move(sched));
  }
  out.params = {{"M", M},
                {"first", {{"construction", a.construction}, {"params", a.params}}},
                {"second", {{"construction", b.construction}, {"params", b.params}}}};
  out.validate();
  return out;
}

// ---------------------------------------------------------------- admissibility

std::string admissibility_constraint_name(std::string_view x, std::size_t l) {
  const std::string s(x);
  if (l == 2) return s + "_2 ≤ 2" + s + "_1";
  if (l == 3) return s + "_3 ≤ 2" + s + "_2 − " + s + "_1";
  const std::string L = std::to_string(l);
  return s + "_" + L + " ≤ " + s + "_" + std::to_string(l - 1) + " + " + s + "_1 − Σ_{k=2}^{" +
         std::to_string(l - 1) + "} (" + L + "−k)(" + s + "_{k−1} + " + s + "_1 − " + s + "_k)";
}

AdmissibilityReport validate_targets(const DimensionTargets& t, std::size_t max_fold) {
  AdmissibilityReport r;
  auto check = [&](bool ok, std::string name, std::string detail) {
    r.checked.push_back(name);
    if (!ok) {
      r.ok = false;
      r.violations.push_back({std::move(name), std::move(detail)});
    }
  };
  const std::pair<const char*, const std::vector<Rational>*> seqs[] = {{"α", &t.alpha}, {"β", &t.beta}, {"γ", &t.gamma}};
  for (const auto& [sym, v] : seqs) {
    const std::string s = sym;
    for (std::size_t i = 0; i < v->size(); ++i) {
      const auto I = std::to_string(i + 1);
      check((*v)[i] >= 0 && (*v)[i] <= 1, "0 ≤ " + s + "_" + I + " ≤ 1", s + "_" + I + " = " + to_string((*v)[i]));
      if (i > 0)
        check((*v)[i - 1] <= (*v)[i], s + "_" + std::to_string(i) + " ≤ " + s + "_" + I,
              to_string((*v)[i - 1]) + " > " + to_string((*v)[i]));
    }
  }
  for (std::size_t i = 0; i < std::min(t.alpha.size(), t.beta.size()); ++i)
    check(t.alpha[i] <= t.beta[i], "α_" + std::to_string(i + 1) + " ≤ β_" + std::to_string(i + 1),
          to_string(t.alpha[i]) + " > " + to_string(t.beta[i]));
  for (std::size_t i = 0; i < std::min(t.beta.size(), t.gamma.size()); ++i)
    check(t.beta[i] <= t.gamma[i], "β_" + std::to_string(i + 1) + " ≤ γ_" + std::to_string(i + 1),
          to_string(t.beta[i]) + " > " + to_string(t.gamma[i]));
  if (t.beta.empty())
    for (std::size_t i = 0; i < std::min(t.alpha.size(), t.gamma.size()); ++i)
      check(t.alpha[i] <= t.gamma[i], "α_" + std::to_string(i + 1) + " ≤ γ_" + std::to_string(i + 1), "");

  for (const auto& [sym, v] : {seqs[1], seqs[2]}) {
    const auto& x = *v;
    for (std::size_t l = 2; l <= std::min(max_fold, x.size()); ++l) {
      Rational bound = x[l - 2] + x[0];
      for (std::size_t k = 2; k <= l - 1; ++k)
        bound -= Rational(static_cast<unsigned long>(l - k)) * (x[k - 2] + x[0] - x[k - 1]);
      const std::string s = sym;
      check(x[l - 1] <= bound, admissibility_constraint_name(s, l),
            s + "_" + std::to_string(l) + " = " + to_string(x[l - 1]) + " > " + to_string(bound));
    }
  }
  return r;
}

}  // namespace sumlab
