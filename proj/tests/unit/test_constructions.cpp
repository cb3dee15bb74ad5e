#include "../common/template_oracle.hpp"
#include "doctest.h"
#include "sumlab/constructions.hpp"
#include "sumlab/errors.hpp"

using namespace sumlab;

namespace {

std::vector<Rational> R(std::initializer_list<const char*> xs) {
  std::vector<Rational> v;
  for (auto x : xs) v.push_back(parse_rational(x));
  return v;
}

std::vector<std::string> strs(const SetSpec& s) {
  std::vector<std::string> out;
  for (const auto& c : s.components) out.push_back(c.str());
  return out;
}

}  // namespace

TEST_CASE("scale sequences") {
  auto p = make_scale_sequence(ScalePolicy::paper, 5);
  CHECK(p.at(2) == 16);
  CHECK(p.values() == std::vector<std::size_t>{4, 16, 256, 65536, 4294967296ull});
  CHECK_THROWS_AS(make_scale_sequence(ScalePolicy::paper, 6), ConfigError);
  CHECK(make_scale_sequence(ScalePolicy::scaled, 4, 4).values() == std::vector<std::size_t>{4, 16, 64, 256});
  CHECK(make_scale_sequence(ScalePolicy::scaled, 5, 2).values() == std::vector<std::size_t>{2, 4, 8, 17, 37});
  for (std::size_t b = 2; b <= 5; ++b) {
    auto s = make_scale_sequence(ScalePolicy::scaled, 8, b);
    for (std::size_t k = 1; k < 8; ++k) {
      CHECK(s.at(k + 1) > s.at(k));
      CHECK(s.gap(k) % k == 0);
      CHECK(s.at(k + 1) >= b * s.at(k));
      // least such value
      CHECK((s.at(k + 1) - 1 < b * s.at(k) || (s.at(k + 1) - 1 - s.at(k)) % k != 0));
    }
  }
  CHECK_THROWS_AS(ScaleSequence::from_values({2, 4, 7}), ConstructionError);
  CHECK_THROWS_AS(ScaleSequence::from_values({3, 3}), ConstructionError);
}

TEST_CASE("star floor") {
  CHECK(star_floor(16, Rational(1, 2), 240, 2) == 32);
  CHECK(star_floor(16, Rational(1), 240, 2) == 16);
  CHECK(star_floor(16, Rational(0), 240, 2) == 32);
  CHECK(star_floor(16, Rational(1, 100), 240, 2) == 240);
}

TEST_CASE("block parameters") {
  auto sc = make_scale_sequence(ScalePolicy::scaled, 11, 2);
  DimensionTargets t{R({"0", "1/4"}), R({"3/10", "1/2"}), {}};
  auto bp = block_params(10, t, sc, DelayVariant::lowbox);
  CHECK(bp.l == 3);
  CHECK(bp.m == 5);
  CHECK(bp.d[0] == 10 * sc.at(10));
  DimensionTargets u{R({"1/4", "1/4", "1/4"}), R({"1/4", "1/2", "5/8"}), {}};
  auto b8 = block_params(8, u, sc, DelayVariant::lowbox);
  CHECK(b8.l == 2);
  CHECK(b8.m == 4);
  CHECK(b8.s == 5);
  CHECK_FALSE(b8.clamped);
  // floors can overshoot l+m even for admissible targets
  DimensionTargets w{R({"0", "0", "0"}), R({"1/3", "1/3", "1/3"}), {}};
  CHECK_NOTHROW(block_params(2, w, sc, DelayVariant::lowbox, FloorPolicy::strict));
  DimensionTargets x{R({"0", "0", "0"}), R({"1/2", "1/2", "1"}), {}};
  auto c1 = block_params(1, x, sc, DelayVariant::lowbox, FloorPolicy::clamp);
  CHECK(c1.clamped);
  CHECK(c1.s == c1.l + c1.m);
  try {
    block_params(1, x, sc, DelayVariant::lowbox, FloorPolicy::strict);
    FAIL("expected an admissibility error");
  } catch (const AdmissibilityError& e) {
    CHECK(e.constraint() == "s_k ≤ l_k + m_k");
  }
}

TEST_CASE("block templates") {
  auto sc = ScaleSequence::from_values({2, 4, 8, 20, 28});
  BlockParams bp;
  bp.k = 4;
  bp.l = 2;
  bp.m = 4;
  CHECK(make_block(BlockKind::parse("b1"), 4, bp, sc).str() == "aa00aa00");
  CHECK(make_block(BlockKind::parse("b2"), 4, bp, sc).str() == "00aa00aa");
  bp.d[0] = 100;
  CHECK(make_block(BlockKind::parse("a1"), 4, bp, sc).str() == "00000000");
  bp.d[0] = 4;
  CHECK(make_block(BlockKind::parse("a1"), 4, bp, sc).str() == "0000aa00");
  bp.s = 5;
  bp.k = 8;
  BlockParams b3{};
  b3.k = 8;
  b3.l = 2;
  b3.m = 4;
  b3.s = 5;
  CHECK(chunk_template(BlockKind::parse("b3"), b3).str() == "00a0a000");
  CHECK_THROWS_AS(make_block(BlockKind::parse("b1"), 3, bp, sc), InvariantViolation);
  auto bad = ScaleSequence::from_values({2, 4, 8, 20, 28});
  BlockParams b2{};
  b2.k = 2;
  b2.l = 1;
  b2.d[0] = 1;
  CHECK_THROWS_AS(make_block(BlockKind::parse("a1"), 2, b2, bad), ConstructionError);
}

TEST_CASE("block kinds") {
  CHECK(BlockKind::parse("γ2").name() == "gamma2");
  CHECK(BlockKind::parse("a3").specular().name() == "alpha3");
  CHECK(BlockKind::parse("beta1").specular().name() == "beta2");
  CHECK_THROWS_AS(BlockKind::parse("x1"), ConfigError);
}

TEST_CASE("schedule tables") {
  CHECK(schedule_haus_lowbox().rows.size() == 6);
  CHECK(schedule_haus_lowbox().period == 3);
  CHECK(schedule_all_dims_2().rows.size() == 6);
  auto t3 = schedule_all_dims_3();
  CHECK(t3.rows.size() == 18);
  CHECK(t3.period == 12);
  auto want = oracle::rows_for("all-dims-3");
  CHECK(all_dims_3_table_text() == want);
  for (const char* name : {"haus-lowbox", "all-dims-2"}) {
    auto rows = oracle::rows_for(name);
    auto t = std::string(name) == "haus-lowbox" ? schedule_haus_lowbox() : schedule_all_dims_2();
    for (std::size_t r = 0; r < rows.size(); ++r) {
      auto tok = oracle::tokens(rows[r]);
      for (std::size_t c = 0; c < tok.size(); ++c) CHECK(t.rows[r][c] == BlockKind::parse(tok[c]));
    }
  }
}

TEST_CASE("examples match the string re-expansion") {
  auto sc = make_scale_sequence(ScalePolicy::scaled, 7, 2);
  std::vector<std::size_t> n = sc.values();
  using oracle::Q;
  struct Case {
    const char* name;
    std::vector<Q> a, b, g;
    std::size_t comps;
  };
  std::vector<Case> cases = {
      {"pair-hausdorff", {Q(1, 4), Q(1, 2)}, {}, {}, 2},
      {"pair-hausdorff", {Q(0), Q(0)}, {}, {}, 1},
      {"triple-hausdorff", {Q(1, 4), Q(1, 2), Q(3, 4)}, {}, {}, 3},
      {"haus-lowbox", {Q(1, 4), Q(1, 2)}, {Q(1, 2), Q(1)}, {}, 6},
      {"haus-lowbox", {Q(0), Q(1, 4)}, {Q(1, 2), Q(3, 4)}, {}, 6},
      {"all-dims-2", {Q(1, 4), Q(1, 4)}, {Q(1, 4), Q(1, 2)}, {Q(1, 2), Q(3, 4)}, 6},
      {"all-dims-3", {Q(1, 4), Q(1, 2), Q(1, 2)}, {Q(1, 4), Q(1, 2), Q(1, 2)}, {Q(1, 2), Q(1, 2), Q(1, 2)}, 18},
  };
  for (const auto& c : cases) {
    DimensionTargets t;
    for (auto& x : c.a) t.alpha.push_back(x);
    for (auto& x : c.b) t.beta.push_back(x);
    for (auto& x : c.g) t.gamma.push_back(x);
    for (std::size_t blocks = 1; blocks < n.size(); ++blocks) {
      auto spec = build_example(parse_example(c.name), t, sc, n[blocks] - 1);
      INFO(c.name << " blocks=" << blocks);
      CHECK(spec.components.size() == c.comps);
      CHECK(spec.depth == n[blocks] - 1);
      CHECK(strs(spec) == oracle::expand(c.name, c.a, c.b, c.g, n, blocks));
    }
  }
}

TEST_CASE("pair example with alpha_1 = 1/2 and alpha_2 = 1") {
  auto sc = make_scale_sequence(ScalePolicy::scaled, 7, 2);
  auto s = build_example(Example::pair_hausdorff, {R({"1/2", "1"}), {}, {}}, sc);
  // [n/1]_* = n gives an empty zero run in every alpha_2 slot
  for (const auto& z : s.zero_runs) CHECK(z.kind == "alpha1");
  auto& A2 = s.components[1];
  for (std::size_t k = 2; k + 1 <= sc.horizon(); k += 3)
    for (std::size_t pos = sc.at(k); pos < sc.at(k + 1) && pos <= s.depth; ++pos) CHECK(A2.is_free(pos));
}

TEST_CASE("example errors") {
  auto sc = make_scale_sequence(ScalePolicy::scaled, 5, 2);
  CHECK_THROWS_AS(build_example(Example::haus_lowbox, {R({"1/4", "1/2"}), R({"1/5", "1/2"}), {}}, sc), AdmissibilityError);
  CHECK_THROWS_AS(build_example(Example::haus_lowbox, {R({"1/4", "1/2"}), R({"1/2", "1"}), {}}, sc, 9),
                  ConstructionError);
  CHECK_THROWS_AS(build_example(Example::all_dims_3, {R({"0", "0"}), R({"0", "0"}), R({"0", "0"})}, sc), ConfigError);
}

TEST_CASE("validator") {
  auto r = validate_targets({{}, R({"0.2", "0.5"}), {}}, 2);
  CHECK_FALSE(r.ok);
  REQUIRE(!r.violations.empty());
  CHECK(r.violations[0].constraint == "β_2 ≤ 2β_1");
  CHECK(validate_targets({{}, R({"0.25", "0.5", "0.625"}), {}}, 3).ok);
  CHECK_FALSE(validate_targets({{}, R({"0.25", "0.5", "0.8"}), {}}, 3).ok);
  for (const char* c : {"0", "1/7", "1/2", "1"})
    CHECK(validate_targets({R({c, c, c}), R({c, c, c}), R({c, c, c})}, 3).ok);
  // the recursive bound taken literally rejects positive constants from l = 4 on
  CHECK(validate_targets({{}, R({"0", "0", "0", "0"}), {}}, 4).ok);
  CHECK_FALSE(validate_targets({{}, R({"1/2", "1/2", "1/2", "1/2"}), {}}, 4).ok);
  CHECK_FALSE(validate_targets({R({"1/2"}), R({"1/4"}), {}}, 1).ok);
  CHECK_FALSE(validate_targets({{}, R({"1/2", "1/4"}), {}}, 1).ok);
  CHECK_FALSE(validate_targets({{}, R({"3/2"}), {}}, 1).ok);
  CHECK(admissibility_constraint_name("γ", 3) == "γ_3 ≤ 2γ_2 − γ_1");
}

TEST_CASE("paste") {
  auto a = SetSpec::from_patterns({"aaaa", "0000"});
  auto b = SetSpec::from_patterns({"a0a"});
  auto p = paste({a, b}, {{2, 3}});
  CHECK(p.depth == 5);
  CHECK(strs(p) == std::vector<std::string>{"aaa0a", "00a0a"});
  CHECK(PastingPlan{{2, 3, 4}}.offsets() == std::vector<std::size_t>{0, 2, 5});
  CHECK_THROWS_AS(paste({a, b}, {{5, 3}}), ConstructionError);
  CHECK_THROWS_AS(paste({a, b}, {{0, 3}}), ConstructionError);
  CHECK_THROWS_AS(paste({a}, {{1, 1}}), ConstructionError);
  auto sc = make_scale_sequence(ScalePolicy::scaled, 5, 2);
  auto h = build_example(Example::haus_lowbox, {R({"1/4", "1/2"}), R({"1/2", "1"}), {}}, sc);
  CHECK_NOTHROW(paste({h}, {{7}}));
  CHECK_THROWS_AS(paste({h}, {{6}}), ConstructionError);
}

TEST_CASE("interleave") {
  CHECK_FALSE(interleave_uses_first(1, {2, 4}));
  CHECK(interleave_uses_first(2, {2, 4}));
  CHECK(interleave_uses_first(3, {2, 4}));
  CHECK_FALSE(interleave_uses_first(4, {2, 4}));
  CHECK(interleave_uses_first(9, {2, 4, 6}));
  auto sc = make_scale_sequence(ScalePolicy::scaled, 5, 2);
  DimensionTargets t1{R({"1/4", "1/2"}), R({"1/2", "1"}), {}};
  DimensionTargets t2{R({"0", "0"}), R({"1/4", "1/2"}), {}};
  auto a = build_example(Example::haus_lowbox, t1, sc);
  auto b = build_example(Example::haus_lowbox, t2, sc);
  auto m = interleave(a, b, {2, 4});
  for (std::size_t c = 0; c < 6; ++c) {
    const std::string x = m.components[c].str(), xa = a.components[c].str(), xb = b.components[c].str();
    for (std::size_t k = 1; k <= 4; ++k) {
      const auto& src = interleave_uses_first(k, {2, 4}) ? xa : xb;
      for (std::size_t pos = sc.at(k); pos < sc.at(k + 1); ++pos) CHECK(x[pos - 1] == src[pos - 1]);
    }
  }
  CHECK_THROWS_AS(interleave(a, b, {3, 3}), ConstructionError);
  auto c2 = build_example(Example::haus_lowbox, t1, make_scale_sequence(ScalePolicy::scaled, 5, 3));
  CHECK_THROWS_AS(interleave(a, c2, {1}), ConstructionError);
}
