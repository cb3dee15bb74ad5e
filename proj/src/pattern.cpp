#include "sumlab/pattern.hpp"

#include <bit>

#include "sumlab/errors.hpp"

namespace sumlab {

namespace {

std::size_t word_count(std::size_t n) { return (n + 63) / 64; }

}  // namespace

DigitPattern::DigitPattern(std::size_t length, Symbol fill)
    : length_(length), bits_(word_count(length), fill == Symbol::Free ? ~std::uint64_t{0} : 0) {
  if (fill == Symbol::Free && length % 64 != 0) bits_.back() = (std::uint64_t{1} << (length % 64)) - 1;
}

DigitPattern DigitPattern::parse(std::string_view text) {
  DigitPattern p(text.size(), Symbol::Zero);
  for (std::size_t i = 0; i < text.size(); ++i) {
    switch (text[i]) {
      case '0': break;
      case 'a': p.set(i + 1, Symbol::Free); break;
      default: throw ConfigError("digit pattern may contain only '0' and 'a': " + std::string(text));
    }
  }
  return p;
}

std::string DigitPattern::str() const {
  std::string s(length_, '0');
  for (std::size_t i = 0; i < length_; ++i)
    if ((bits_[i / 64] >> (i % 64)) & 1) s[i] = 'a';
  return s;
}

bool DigitPattern::is_free(std::size_t pos) const {
  if (pos == 0 || pos > length_) throw InvariantViolation("digit position out of range");
  const std::size_t i = pos - 1;
  return (bits_[i / 64] >> (i % 64)) & 1;
}

void DigitPattern::set(std::size_t pos, Symbol s) {
  if (pos == 0 || pos > length_) throw InvariantViolation("digit position out of range");
  const std::size_t i = pos - 1;
  const std::uint64_t m = std::uint64_t{1} << (i % 64);
  if (s == Symbol::Free)
    bits_[i / 64] |= m;
  else
    bits_[i / 64] &= ~m;
}

DigitPattern& DigitPattern::append(const DigitPattern& other) {
  if (length_ % 64 == 0) {
    // word-aligned fast path
    bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
    length_ += other.length_;
    return *this;
  }
  const std::size_t start = length_;
  length_ += other.length_;
  bits_.resize(word_count(length_), 0);
  for (std::size_t i = 0; i < other.length_; ++i)
    if ((other.bits_[i / 64] >> (i % 64)) & 1) {
      const std::size_t t = start + i;
      bits_[t / 64] |= std::uint64_t{1} << (t % 64);
    }
  return *this;
}

DigitPattern& DigitPattern::append(Symbol s, std::size_t count) {
  return append(DigitPattern(count, s));
}

DigitPattern DigitPattern::repeated(std::size_t times) const {
  DigitPattern out;
  for (std::size_t r = 0; r < times; ++r) out.append(*this);
  return out;
}

DigitPattern DigitPattern::slice(std::size_t first, std::size_t count) const {
  if (first == 0 || first - 1 + count > length_) throw InvariantViolation("pattern slice out of range");
  DigitPattern out(count, Symbol::Zero);
  for (std::size_t i = 0; i < count; ++i)
    if (is_free(first + i)) out.set(i + 1, Symbol::Free);
  return out;
}

std::size_t DigitPattern::count_free(std::size_t upto) const {
  if (upto > length_) throw InvariantViolation("count_free beyond pattern length");
  std::size_t total = 0;
  const std::size_t full = upto / 64;
  for (std::size_t w = 0; w < full; ++w) total += std::popcount(bits_[w]);
  if (upto % 64) total += std::popcount(bits_[full] & ((std::uint64_t{1} << (upto % 64)) - 1));
  return total;
}

DigitPattern DigitPattern::operator|(const DigitPattern& other) const {
  if (length_ != other.length_) throw InvariantViolation("OR of patterns with different lengths");
  DigitPattern out = *this;
  for (std::size_t w = 0; w < bits_.size(); ++w) out.bits_[w] |= other.bits_[w];
  return out;
}

void SetSpec::validate() const {
  if (components.empty()) throw InvariantViolation("set spec has no components");
  if (depth == 0) throw InvariantViolation("set spec depth must be positive");
  for (const auto& c : components)
    if (c.size() != depth)
      throw InvariantViolation("component length " + std::to_string(c.size()) + " differs from depth " +
                               std::to_string(depth));
}

SetSpec SetSpec::from_patterns(const std::vector<std::string>& patterns) {
  SetSpec s;
  for (const auto& p : patterns) s.components.push_back(DigitPattern::parse(p));
  if (!s.components.empty()) s.depth = s.components.front().size();
  s.validate();
  return s;
}

std::vector<std::size_t> SetSpec::block_boundaries() const {
  std::vector<std::size_t> out;
  for (std::size_t n : scales)
    if (n >= 2 && n - 1 <= depth) out.push_back(n - 1);
  return out;
}

}  // namespace sumlab
