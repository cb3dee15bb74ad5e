#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sumlab/bigint.hpp"
#include "sumlab/pattern.hpp"

namespace sumlab {

struct DimensionTargets {
  std::vector<Rational> alpha;
  std::vector<Rational> beta;
  std::vector<Rational> gamma;
};

/// n_1 < n_2 < ... < n_K with k | (n_{k+1} - n_k).
class ScaleSequence {
 public:
  ScaleSequence() = default;
  static ScaleSequence from_values(std::vector<std::size_t> n);

  std::size_t horizon() const noexcept { return n_.size(); }
  /// n_k for 1 <= k <= horizon.
  std::size_t at(std::size_t k) const;
  /// n_{k+1} - n_k.
  std::size_t gap(std::size_t k) const;
  const std::vector<std::size_t>& values() const noexcept { return n_; }

  friend bool operator==(const ScaleSequence&, const ScaleSequence&) = default;

 private:
  std::vector<std::size_t> n_;
};

enum class ScalePolicy { paper, scaled };

ScalePolicy parse_scale_policy(std::string_view text);

/// doubly exponential ("paper"): n_k = least n >= 2^(2^k) with (k-1) | (n - n_{k-1}); refuses K > 5.
/// scaled: n_1 = base, n_k = least n >= base * n_{k-1} with the same divisibility.
ScaleSequence make_scale_sequence(ScalePolicy policy, std::size_t horizon, std::size_t base = 2);

/// [n/alpha]_*: min(floor(n/alpha), gap) for alpha != 0, else i*n.
std::size_t star_floor(std::size_t n, const Rational& alpha, std::size_t gap, std::size_t i);

enum class DelayVariant { lowbox, full };  // d_i(k) from beta_i/alpha_i or gamma_i/alpha_i
enum class FloorPolicy { strict, clamp };

struct BlockParams {
  std::size_t k = 0;
  std::size_t l = 0, m = 0, p = 0, q = 0, s = 0, v = 0;
  std::array<std::size_t, 3> d{0, 0, 0};
  bool clamped = false;  // s or v was lowered to keep the triple chunks well defined
};

BlockParams block_params(std::size_t k, const DimensionTargets& targets, const ScaleSequence& scales,
                         DelayVariant variant, FloorPolicy policy = FloorPolicy::strict);

enum class Family { alpha, beta, gamma };

struct BlockKind {
  Family family = Family::beta;
  int index = 1;  // 1..3

  std::string name() const;  // "alpha1", "beta2", ...
  static BlockKind parse(std::string_view text);
  /// Swaps indices 1 and 2; index 3 is fixed.
  BlockKind specular() const;

  friend bool operator==(const BlockKind&, const BlockKind&) = default;
};

/// The length-k word repeated inside a block of this kind.
DigitPattern chunk_template(const BlockKind& kind, const BlockParams& params);

/// Pattern for positions n_k .. n_{k+1}-1.
DigitPattern make_block(const BlockKind& kind, std::size_t k, const BlockParams& params, const ScaleSequence& scales);

struct ScheduleTable {
  std::size_t period = 0;
  std::vector<std::vector<BlockKind>> rows;

  const BlockKind& at(std::size_t row, std::size_t k) const { return rows[row][k % period]; }
};

enum class Example { pair_hausdorff, triple_hausdorff, haus_lowbox, all_dims_2, all_dims_3 };

std::string to_string(Example e);
Example parse_example(std::string_view text);

ScheduleTable schedule_haus_lowbox();
ScheduleTable schedule_all_dims_2();
ScheduleTable schedule_all_dims_3();
/// The 18 rows of the three-fold table as text ("g1 a1 ..."), one per component.
const std::vector<std::string>& all_dims_3_table_text();

/// Builds the example's components up to `depth` (default n_K - 1), which
/// must equal n_k - 1 for some k.
SetSpec build_example(Example example, const DimensionTargets& targets, const ScaleSequence& scales,
                      std::optional<std::size_t> depth = std::nullopt, FloorPolicy policy = FloorPolicy::clamp);

struct PastingPlan {
  std::vector<std::size_t> lengths;  // M_1, M_2, ...

  /// S_1 = 0, S_{i+1} = S_i + M_i.
  std::vector<std::size_t> offsets() const;
};

SetSpec paste(const std::vector<SetSpec>& specs, const PastingPlan& plan, std::size_t max_components = 4096);

/// Block k comes from `a` when M_{2r-1} <= k < M_{2r} for some r, otherwise from `b`.
SetSpec interleave(const SetSpec& a, const SetSpec& b, const std::vector<std::size_t>& M);

/// True when block k is drawn from the first source.
bool interleave_uses_first(std::size_t k, const std::vector<std::size_t>& M);

struct AdmissibilityIssue {
  std::string constraint;
  std::string detail;
};

struct AdmissibilityReport {
  bool ok = true;
  std::vector<std::string> checked;
  std::vector<AdmissibilityIssue> violations;
};

AdmissibilityReport validate_targets(const DimensionTargets& targets, std::size_t max_fold);

/// Name of the sum-set inequality for sequence `symbol` at fold l.
std::string admissibility_constraint_name(std::string_view symbol, std::size_t l);

}  // namespace sumlab
