#pragma once

#include <iosfwd>

namespace sumlab {

/// Entry point behind the `sumlab` executable. Returns the process exit code:
/// 0 success, 2 config error, 3 admissibility error, 4 budget exceeded,
/// 5 internal invariant violation.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sumlab
