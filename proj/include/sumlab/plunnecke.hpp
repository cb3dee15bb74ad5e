#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "json.hpp"
#include "sumlab/bigint.hpp"
#include "sumlab/pattern.hpp"

namespace sumlab {

/// Sorted, deduplicated set of integers.
class FiniteIntSet {
 public:
  FiniteIntSet() = default;
  static FiniteIntSet from_unsorted(std::vector<BigInt> values);
  static FiniteIntSet from_ints(const std::vector<long>& values);

  std::size_t size() const noexcept { return elems_.size(); }
  bool empty() const noexcept { return elems_.empty(); }
  const std::vector<BigInt>& elements() const noexcept { return elems_; }

  friend bool operator==(const FiniteIntSet&, const FiniteIntSet&) = default;

 private:
  std::vector<BigInt> elems_;
};

FiniteIntSet sumset(const FiniteIntSet& e, const FiniteIntSet& f);
FiniteIntSet iterated_sumset(const FiniteIntSet& f, std::size_t l);

struct RuzsaReport {
  Rational K;               // |E+F| / |E|
  BigInt sum_size;          // |E+F|
  BigInt iterated_size;     // |lF|
  Rational bound;           // K^l |E|
  bool holds = false;
};

RuzsaReport ruzsa_check(const FiniteIntSet& e, const FiniteIntSet& f, std::size_t l);

/// Finite set of nonnegative rationals stored over one common denominator.
class PointSample {
 public:
  static PointSample from_rationals(const std::vector<Rational>& points);
  static PointSample from_integers(std::vector<BigInt> numerators, BigInt denominator);
  /// One rational ("p/q") or decimal per line; blank lines and '#' comments skipped.
  static PointSample parse(std::istream& in);

  std::size_t size() const noexcept { return nums_.size(); }
  const BigInt& denominator() const noexcept { return den_; }
  const std::vector<BigInt>& numerators() const noexcept { return nums_; }
  std::vector<Rational> points() const;

 private:
  BigInt den_ = 1;
  std::vector<BigInt> nums_;  // sorted, unique, nonnegative
};

PointSample sample_sum(const PointSample& a, const PointSample& b);
PointSample sample_iterated(const PointSample& a, std::size_t l);

/// Indices i of the scale-j cells [i, i+1) 2^-j meeting the sample.
FiniteIntSet dyadic_cells(const PointSample& x, std::size_t j);

/// |D_{j,l}(X)|: windows [i, i+l) 2^-j, i >= 0, meeting X.
BigInt dyadic_count(const PointSample& x, std::size_t j, std::size_t l);

struct SpecDyadicCount {
  BigInt count;
  bool upper_bound = false;
};

/// For a digit-pattern set only the cells are known; returns l * prefix_count, flagged.
SpecDyadicCount dyadic_count(const SetSpec& s, std::size_t j, std::size_t l);

struct Prop31Scale {
  std::size_t j = 0;
  BigInt lhs;        // |D_{j,l}(lB)|
  BigInt d1_a;       // |D_{j,1}(A)|
  BigInt d2_ab;      // |D_{j,2}(A+B)|
  bool holds_stated = false;     // constant l+1
  bool holds_certified = false;  // constant 2l-1
  double exponent_lhs = 0, exponent_a = 0, exponent_ab = 0;
  double implied_bound = 0;      // l e_ab - (l-1) e_a + log2(l+1)/j
};

struct Prop31Report {
  std::size_t fold = 2;
  std::vector<Prop31Scale> scales;
  bool all_stated = true;
  bool all_certified = true;
  std::size_t argmin_ab = 0;     // scale minimizing log|D_{j,2}(A+B)|/j
  double implied_at_argmin = 0;
};

Prop31Report prop31_check(const PointSample& a, const PointSample& b, std::size_t l, std::size_t j_min,
                          std::size_t j_max);

struct CoverBoundReport {
  std::size_t j = 0;
  std::size_t fold = 2;
  BigInt lhs;             // |D_{j,l}(A_1 + ... + A_l)|
  BigInt index_sumset;    // |D_{j,1}(A_1) + ... + D_{j,1}(A_l)| as index sets
  bool holds_stated = false;     // lhs <= (l+1) * index_sumset
  bool holds_certified = false;  // lhs <= (2l-1) * index_sumset
};

CoverBoundReport sumset_cover_bound_check(const std::vector<PointSample>& samples, std::size_t j);

FiniteIntSet random_int_set(std::mt19937_64& rng, std::size_t max_size);
/// Points on the grid 2^-grid_bits inside [0, 1).
PointSample random_point_sample(std::mt19937_64& rng, std::size_t max_size, std::size_t grid_bits = 16);

struct SuiteSummary {
  std::uint64_t seed = 0;
  std::size_t ruzsa_cases = 0, ruzsa_failures = 0;
  std::size_t cover_cases = 0, cover_failures_stated = 0, cover_failures_certified = 0;
  std::size_t prop31_cases = 0, prop31_failures_stated = 0, prop31_failures_certified = 0;
  nlohmann::json first_failures = nlohmann::json::object();
};

/// Seeded batch: `pairs` Ruzsa instances and `samples` cover/Prop-3.1 instances at j <= j_max.
SuiteSummary run_random_suite(std::uint64_t seed, std::size_t pairs, std::size_t samples, std::size_t j_max);

nlohmann::json to_json(const Prop31Report& r);
nlohmann::json to_json(const SuiteSummary& s);

}  // namespace sumlab
