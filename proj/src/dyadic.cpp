#include "sumlab/dyadic.hpp"

#include <algorithm>

#include "sumlab/errors.hpp"

namespace sumlab {

BinaryWord BinaryWord::parse(std::string_view text) {
  std::vector<bool> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') throw ConfigError("binary word must contain only 0/1");
    bits.push_back(c == '1');
  }
  return BinaryWord(std::move(bits));
}

BigInt BinaryWord::value() const {
  BigInt v;
  const std::size_t n = bits_.size();
  for (std::size_t i = 0; i < n; ++i)
    if (bits_[i]) mpz_setbit(v.get_mpz_t(), n - 1 - i);
  return v;
}

std::string BinaryWord::str() const {
  std::string s;
  s.reserve(bits_.size());
  for (bool b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

IntervalCover::IntervalCover(std::size_t depth, std::size_t width, std::vector<BigInt> starts)
    : depth_(depth), width_(width), starts_(std::move(starts)) {
  if (width_ == 0) throw InvariantViolation("interval cover width must be positive");
  for (std::size_t i = 0; i < starts_.size(); ++i) {
    if (starts_[i] < 0) throw InvariantViolation("interval cover start is negative");
    if (i > 0 && !(starts_[i - 1] < starts_[i]))
      throw InvariantViolation("interval cover starts must be strictly increasing");
  }
}

IntervalCover IntervalCover::from_unsorted(std::size_t depth, std::size_t width, std::vector<BigInt> starts) {
  std::sort(starts.begin(), starts.end());
  starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
  return IntervalCover(depth, width, std::move(starts));
}

IntervalCover coarsen(const IntervalCover& cover, std::size_t coarse_depth) {
  if (coarse_depth > cover.depth())
    throw ScaleError("coarsen: target depth " + std::to_string(coarse_depth) + " exceeds cover depth " +
                     std::to_string(cover.depth()));
  const std::size_t shift = cover.depth() - coarse_depth;
  if (shift == 0 && cover.width() == 1) return cover;

  std::vector<BigInt> cells;
  BigInt first, last;
  for (const auto& s : cover.starts()) {
    mpz_fdiv_q_2exp(first.get_mpz_t(), s.get_mpz_t(), shift);
    BigInt end = s + (cover.width() - 1);
    mpz_fdiv_q_2exp(last.get_mpz_t(), end.get_mpz_t(), shift);
    // starts are increasing, so only the tail of `cells` can overlap
    BigInt c = first;
    if (!cells.empty() && cells.back() >= c) c = cells.back() + 1;
    for (; c <= last; ++c) cells.push_back(c);
  }
  return IntervalCover(coarse_depth, 1, std::move(cells));
}

IntervalCover cover_sum(const IntervalCover& a, const IntervalCover& b) {
  if (a.depth() != b.depth())
    throw ScaleError("cover_sum: depth mismatch " + std::to_string(a.depth()) + " vs " + std::to_string(b.depth()));
  std::vector<BigInt> sums;
  sums.reserve(a.starts().size() * b.starts().size());
  for (const auto& x : a.starts())
    for (const auto& y : b.starts()) sums.push_back(x + y);
  return IntervalCover::from_unsorted(a.depth(), a.width() + b.width(), std::move(sums));
}

CellCountBracket cell_count(const IntervalCover& cover) {
  CellCountBracket out{BigInt(static_cast<unsigned long>(cover.starts().size())), BigInt(0)};
  BigInt covered_to = -1;  // last cell already counted
  for (const auto& s : cover.starts()) {
    BigInt end = s + (cover.width() - 1);
    if (end <= covered_to) continue;
    BigInt from = s > covered_to ? s : BigInt(covered_to + 1);
    out.upper += end - from + 1;
    covered_to = end;
  }
  return out;
}

}  // namespace sumlab
