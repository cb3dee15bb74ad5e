#pragma once

// Distinct-prefix counting for unions of digit patterns and for their
// l-fold sums. Nothing here enumerates points except brute_force_oracle.

#include <cstddef>
#include <vector>

#include "sumlab/bigint.hpp"
#include "sumlab/dyadic.hpp"
#include "sumlab/pattern.hpp"

namespace sumlab {

enum class CountMode { exact, bracket };

const char* to_string(CountMode m);
CountMode parse_count_mode(std::string_view text);

struct EngineOptions {
  std::size_t state_budget = 1'000'000;
};

/// Counts at one scale j. `starts` brackets the number of distinct sums of
/// depth-j prefixes (left endpoints of the width-l cover); `cells` brackets
/// the number of unit cells in the union of those width-l intervals.
struct ScaleCount {
  std::size_t j = 0;
  CellCountBracket starts;
  CellCountBracket cells;
};

struct DistinctCountResult {
  std::size_t fold = 1;
  CountMode requested = CountMode::exact;
  CountMode used = CountMode::exact;
  bool fell_back = false;
  std::size_t combinations = 0;  // addend combinations after merging equal column profiles
  std::size_t states = 0;        // subset states created
  std::size_t widest_layer = 0;  // most live states at a single position
  std::vector<ScaleCount> scales;

  const ScaleCount& at(std::size_t j) const;
};

/// Number of distinct length-j prefixes of points in the union (lower == upper).
CellCountBracket prefix_count(const SetSpec& s, std::size_t j);
std::vector<BigInt> prefix_counts(const SetSpec& s, const std::vector<std::size_t>& scales);

DistinctCountResult sum_prefix_cover(const SetSpec& s, std::size_t fold, const std::vector<std::size_t>& scales,
                                     CountMode mode, const EngineOptions& options = {});

/// Single-scale form returning the start-set bracket.
CellCountBracket sum_prefix_cover(const SetSpec& s, std::size_t fold, std::size_t j, CountMode mode,
                                  const EngineOptions& options = {});

struct OracleResult {
  BigInt starts;
  BigInt cells;
};

/// Sum over addend multisets of the product of 2^(free digits in 1..j).
BigInt enumeration_size(const SetSpec& s, std::size_t fold, std::size_t j);

/// Enumerates every addend tuple. Throws BudgetExceeded when
/// enumeration_size exceeds `budget`.
OracleResult brute_force_oracle(const SetSpec& s, std::size_t fold, std::size_t j,
                                const BigInt& budget = pow2(24));

/// OFF_n: minimum over points of the fraction of branching positions among 1..n.
Rational branching_min_average(const SetSpec& s, std::size_t n);
std::vector<Rational> branching_min_averages(const SetSpec& s, const std::vector<std::size_t>& ns);

/// Nondecreasing index tuples of length `fold` over m components.
std::vector<std::vector<std::size_t>> fold_combinations(std::size_t m, std::size_t fold);

}  // namespace sumlab
