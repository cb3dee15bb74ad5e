#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace sumlab {

enum class Symbol : std::uint8_t { Zero, Free };

/// Word over {Zero, Free}; position 1 is the most significant binary digit.
/// Text form uses '0' for Zero and 'a' for Free.
class DigitPattern {
 public:
  DigitPattern() = default;
  DigitPattern(std::size_t length, Symbol fill);

  static DigitPattern parse(std::string_view text);
  std::string str() const;

  std::size_t size() const noexcept { return length_; }
  bool empty() const noexcept { return length_ == 0; }

  // 1-based positions
  bool is_free(std::size_t pos) const;
  void set(std::size_t pos, Symbol s);

  DigitPattern& append(const DigitPattern& other);
  DigitPattern& append(Symbol s, std::size_t count);
  DigitPattern repeated(std::size_t times) const;
  DigitPattern slice(std::size_t first, std::size_t count) const;

  std::size_t count_free() const { return count_free(length_); }
  /// Free symbols among positions 1..upto.
  std::size_t count_free(std::size_t upto) const;

  /// Positionwise OR of Free masks (the carry-free sum-block rule a+0 = a).
  DigitPattern operator|(const DigitPattern& other) const;

  const std::vector<std::uint64_t>& words() const noexcept { return bits_; }

  friend bool operator==(const DigitPattern& a, const DigitPattern& b) {
    return a.length_ == b.length_ && a.bits_ == b.bits_;
  }

 private:
  std::size_t length_ = 0;
  std::vector<std::uint64_t> bits_;  // bit (pos-1) set when Free
};

struct ZeroRun {
  std::size_t first = 0;   // 1-based, inclusive
  std::size_t last = 0;    // inclusive; last < first means empty
  std::size_t block = 0;   // index k of the scale slot
  std::size_t component = 0;
  std::string kind;

  friend bool operator==(const ZeroRun&, const ZeroRun&) = default;
};

/// Union of digit-pattern components truncated at a common depth, plus the
/// metadata needed to rebuild it.
struct SetSpec {
  std::string construction = "patterns";
  nlohmann::json params = nlohmann::json::object();
  std::size_t depth = 0;
  std::vector<DigitPattern> components;

  std::vector<std::size_t> scales;                    // n_1 < n_2 < ...
  std::vector<std::vector<std::string>> schedule;     // per component, block kind per k
  std::vector<ZeroRun> zero_runs;

  /// Throws InvariantViolation unless all components have length `depth`.
  void validate() const;

  static SetSpec from_patterns(const std::vector<std::string>& patterns);

  /// Scales n_k - 1 lying in [1, depth]: the last digit before each block.
  std::vector<std::size_t> block_boundaries() const;
};

}  // namespace sumlab
