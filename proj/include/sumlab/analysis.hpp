#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "sumlab/automaton.hpp"
#include "sumlab/constructions.hpp"

namespace sumlab {

/// Block boundaries n_k - 1 and zero-run ends n_k + d inside [1, depth];
/// every scale when the spec carries no block structure.
std::vector<std::size_t> default_scales(const SetSpec& s);

/// "boundaries", "all", or a comma separated list such as "4,8,16".
std::vector<std::size_t> select_scales(const SetSpec& s, const std::string& selection);

struct TraceEntry {
  std::size_t j = 0;
  std::size_t fold = 1;
  BigInt lower;  // distinct sums of depth-j prefixes
  BigInt upper;  // unit cells under the width-fold cover
  double exp_lower = 0;
  double exp_upper = 0;
  double predicted = 0;
  CountMode mode = CountMode::exact;
};

struct CountTrace {
  std::vector<TraceEntry> entries;
  bool fell_back = false;
};

CountTrace count_trace(const SetSpec& s, std::size_t fold, const std::vector<std::size_t>& scales,
                       CountMode mode = CountMode::exact, const EngineOptions& options = {});

/// Prefix counts of the union of positionwise ORs over all fold-combinations:
/// the sum set with every carry ignored.
std::vector<BigInt> carry_free_union_counts(const SetSpec& s, std::size_t fold, const std::vector<std::size_t>& scales);

/// Fr_a of the OR of the chunk templates of `kinds` at index params.k.
Rational sum_block_frequency(const std::vector<BlockKind>& kinds, const BlockParams& params);

struct FrequencyRecord {
  std::size_t k = 0;
  std::vector<std::size_t> rows;        // maximizing combination of components
  std::vector<std::string> kinds;       // their block kinds at k
  Rational max_frequency;
  Rational min_frequency;
};

/// For each block k, extremal sum-block frequencies over fold-combinations of rows.
std::vector<FrequencyRecord> frequency_report(const ScheduleTable& table, const DimensionTargets& targets,
                                              const ScaleSequence& scales, std::size_t fold, std::size_t blocks,
                                              DelayVariant variant, FloorPolicy policy = FloorPolicy::clamp);

struct OffEntry {
  std::size_t n = 0;
  Rational off;
  Rational running_min;
};

std::vector<OffEntry> off_trace(const SetSpec& s, const std::vector<std::size_t>& scales);

struct FreedomResult {
  bool holds = false;
  std::size_t j0 = 0;                 // last Zero position of the best combination's OR
  std::vector<std::size_t> combination;
};

FreedomResult interval_freedom_check(const SetSpec& s, std::size_t fold);

void write_trace_csv(std::ostream& out, const std::vector<TraceEntry>& entries, const std::vector<std::string>& header);
void write_off_csv(std::ostream& out, const std::vector<OffEntry>& entries, const std::vector<std::string>& header);

/// "%.12g" rendering used by every emitted file.
std::string format_double(double x);

}  // namespace sumlab
