#pragma once

// Exact dyadic substrate: binary prefixes and unions of width-w dyadic
// intervals [s, s+w) * 2^-j with arbitrary-precision starts.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "sumlab/bigint.hpp"

namespace sumlab {

/// Finite binary word x_1..x_n read as the integer x_1 2^{n-1} + ... + x_n.
class BinaryWord {
 public:
  BinaryWord() = default;
  explicit BinaryWord(std::vector<bool> bits) : bits_(std::move(bits)) {}
  static BinaryWord parse(std::string_view text);

  std::size_t size() const noexcept { return bits_.size(); }
  bool operator[](std::size_t i) const { return bits_[i]; }
  BigInt value() const;
  std::string str() const;

  friend bool operator==(const BinaryWord&, const BinaryWord&) = default;

 private:
  std::vector<bool> bits_;
};

struct CellCountBracket {
  BigInt lower;
  BigInt upper;

  bool exact() const { return lower == upper; }
  friend bool operator==(const CellCountBracket&, const CellCountBracket&) = default;
};

class IntervalCover {
 public:
  /// Starts must be nonnegative and strictly increasing; width positive.
  IntervalCover(std::size_t depth, std::size_t width, std::vector<BigInt> starts);

  /// Sorts and deduplicates before validating.
  static IntervalCover from_unsorted(std::size_t depth, std::size_t width, std::vector<BigInt> starts);

  std::size_t depth() const noexcept { return depth_; }
  std::size_t width() const noexcept { return width_; }
  const std::vector<BigInt>& starts() const noexcept { return starts_; }

  friend bool operator==(const IntervalCover&, const IntervalCover&) = default;

 private:
  std::size_t depth_;
  std::size_t width_;
  std::vector<BigInt> starts_;
};

/// Cells of scale 2^-coarse_depth meeting the cover (width 1 result).
IntervalCover coarsen(const IntervalCover& cover, std::size_t coarse_depth);

/// Minkowski sum at a common depth; widths add.
IntervalCover cover_sum(const IntervalCover& a, const IntervalCover& b);

/// lower = number of starts, upper = number of unit cells in the union.
CellCountBracket cell_count(const IntervalCover& cover);

}  // namespace sumlab
