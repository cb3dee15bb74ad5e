#include <random>
#include <set>

#include "doctest.h"
#include "sumlab/automaton.hpp"
#include "sumlab/errors.hpp"

using namespace sumlab;

namespace {

// Independent enumeration: every point prefix of every component, every
// ordered l-tuple, then the set of sums and the set of covered cells.
struct Naive {
  std::size_t starts = 0;
  std::size_t cells = 0;
};

std::vector<std::uint64_t> prefixes(const DigitPattern& p, std::size_t j) {
  std::vector<std::uint64_t> out{0};
  for (std::size_t pos = 1; pos <= j; ++pos) {
    std::vector<std::uint64_t> next;
    for (auto v : out) {
      next.push_back(2 * v);
      if (p.is_free(pos)) next.push_back(2 * v + 1);
    }
    out.swap(next);
  }
  return out;
}

Naive naive(const SetSpec& s, std::size_t fold, std::size_t j) {
  std::set<std::uint64_t> un;
  for (const auto& c : s.components)
    for (auto v : prefixes(c, j)) un.insert(v);
  std::set<std::uint64_t> sums{0};
  for (std::size_t r = 0; r < fold; ++r) {
    std::set<std::uint64_t> next;
    for (auto a : sums)
      for (auto b : un) next.insert(a + b);
    sums.swap(next);
  }
  std::set<std::uint64_t> cells;
  for (auto x : sums)
    for (std::uint64_t d = 0; d < fold; ++d) cells.insert(x + d);
  return {sums.size(), cells.size()};
}

SetSpec random_spec(std::mt19937_64& rng, std::size_t depth, std::size_t m) {
  std::vector<std::string> pats;
  for (std::size_t i = 0; i < m; ++i) {
    std::string p;
    for (std::size_t k = 0; k < depth; ++k) p += (rng() % 3 == 0) ? '0' : 'a';
    pats.push_back(p);
  }
  return SetSpec::from_patterns(pats);
}

}  // namespace

TEST_CASE("prefix count examples") {
  auto s = SetSpec::from_patterns({"a0a0"});
  CHECK(prefix_count(s, 4).lower == 4);
  CHECK(prefix_count(s, 4).exact());
  CHECK(prefix_count(s, 1).lower == 2);
  auto u = SetSpec::from_patterns({"a0", "0a"});
  CHECK(prefix_count(u, 2).lower == 3);
  CHECK_THROWS_AS(prefix_count(s, 5), ScaleError);
}

TEST_CASE("sum of full interval with itself") {
  auto s = SetSpec::from_patterns({"aaa"});
  // {0..7} + {0..7} = {0..14}
  auto r = sum_prefix_cover(s, 2, std::vector<std::size_t>{1, 2, 3}, CountMode::exact);
  CHECK(r.at(3).starts.lower == 15);
  CHECK(r.at(3).cells.lower == 16);
  CHECK(r.at(1).starts.lower == 3);
  CHECK_FALSE(r.fell_back);
}

TEST_CASE("fold combinations") {
  auto c = fold_combinations(3, 2);
  CHECK(c.size() == 6);
  CHECK(c.front() == std::vector<std::size_t>{0, 0});
  CHECK(c.back() == std::vector<std::size_t>{2, 2});
  CHECK(fold_combinations(4, 3).size() == 20);
}

TEST_CASE("engine agrees with naive enumeration") {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 120; ++it) {
    const std::size_t depth = 3 + rng() % 8;
    const std::size_t m = 1 + rng() % 3;
    const std::size_t fold = 1 + rng() % 3;
    auto s = random_spec(rng, depth, m);
    std::vector<std::size_t> js;
    for (std::size_t j = 1; j <= depth; ++j) js.push_back(j);
    auto r = sum_prefix_cover(s, fold, js, CountMode::exact);
    for (std::size_t j : js) {
      auto n = naive(s, fold, j);
      INFO("spec " << s.components[0].str() << " m=" << m << " fold=" << fold << " j=" << j);
      CHECK(r.at(j).starts.lower == n.starts);
      CHECK(r.at(j).starts.exact());
      CHECK(r.at(j).cells.lower == n.cells);
      if (enumeration_size(s, fold, j) <= pow2(18)) {
        auto o = brute_force_oracle(s, fold, j);
        CHECK(o.starts == n.starts);
        CHECK(o.cells == n.cells);
      }
    }
  }
}

TEST_CASE("bracket mode sandwiches the exact count") {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 60; ++it) {
    auto s = random_spec(rng, 4 + rng() % 6, 1 + rng() % 3);
    const std::size_t fold = 2 + rng() % 2;
    auto ex = sum_prefix_cover(s, fold, s.depth, CountMode::exact);
    auto br = sum_prefix_cover(s, fold, s.depth, CountMode::bracket);
    CHECK(br.lower <= ex.lower);
    CHECK(ex.lower <= br.upper);
  }
}

TEST_CASE("tiny state budget falls back to a valid bracket") {
  auto s = SetSpec::from_patterns({"aa0a0aa0", "0aa0aa0a", "a0a0a0aa"});
  EngineOptions o;
  o.state_budget = 2;
  auto r = sum_prefix_cover(s, 3, std::vector<std::size_t>{8}, CountMode::exact, o);
  CHECK(r.fell_back);
  CHECK(r.used == CountMode::bracket);
  auto n = naive(s, 3, 8);
  CHECK(r.at(8).starts.lower <= n.starts);
  CHECK(n.starts <= r.at(8).starts.upper);
}

TEST_CASE("counts are monotone in j and in fold") {
  std::mt19937_64 rng(3);
  for (int it = 0; it < 40; ++it) {
    auto s = random_spec(rng, 10, 2);
    std::vector<std::size_t> js;
    for (std::size_t j = 1; j <= 10; ++j) js.push_back(j);
    auto r1 = sum_prefix_cover(s, 1, js, CountMode::exact);
    auto r2 = sum_prefix_cover(s, 2, js, CountMode::exact);
    for (std::size_t j = 2; j <= 10; ++j) {
      CHECK(r2.at(j).starts.lower >= r2.at(j - 1).starts.lower);
      CHECK(r2.at(j).starts.lower >= r1.at(j).starts.lower);
    }
  }
}

TEST_CASE("oracle enforces its budget") {
  auto s = SetSpec::from_patterns({std::string(30, 'a')});
  CHECK(enumeration_size(s, 1, 30) == pow2(30));
  CHECK_THROWS_AS(brute_force_oracle(s, 1, 30), BudgetExceeded);
}

TEST_CASE("OFF examples") {
  auto s = SetSpec::from_patterns({"aaaa", "0000"});
  CHECK(branching_min_average(s, 4) == 1);
  auto u = SetSpec::from_patterns({"a000", "0aaa"});
  CHECK(branching_min_average(u, 4) == Rational(1, 4));
  auto t = SetSpec::from_patterns({"a0a0"});
  CHECK(branching_min_average(t, 4) == Rational(1, 2));
  CHECK(branching_min_average(t, 3) == Rational(2, 3));
}

TEST_CASE("OFF of a single component equals its free density") {
  std::mt19937_64 rng(9);
  for (int it = 0; it < 50; ++it) {
    auto s = random_spec(rng, 12, 1);
    for (std::size_t n = 1; n <= 12; ++n)
      {
        Rational want(s.components[0].count_free(n), n);
        want.canonicalize();
        CHECK(branching_min_average(s, n) == want);
      }
  }
}

TEST_CASE("OFF never exceeds the counting dimension") {
  std::mt19937_64 rng(21);
  for (int it = 0; it < 50; ++it) {
    auto s = random_spec(rng, 10, 1 + rng() % 3);
    for (std::size_t n = 1; n <= 10; ++n) {
      // 2^(n*OFF) <= number of prefixes: each point has at least n*OFF branchings
      Rational off = branching_min_average(s, n);
      Rational bits = off * static_cast<long>(n);
      CHECK(bits.get_den() == 1);
      CHECK(pow2(bits.get_num().get_ui()) <= prefix_count(s, n).lower);
    }
  }
}
