#pragma once

#include <iosfwd>

namespace acplan::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    kOk = 0,
    kUsage = 1,  ///< bad flags, unreadable or malformed input
    kInvalidPlan = 2,
    kUnsolvable = 3,
    kResourceLimit = 4,
};

/// Entry point of the `acplan` tool: plan, validate, gen-logs, gen-plans, kb.
/// Machine output goes to `out` (or the file named by -o), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace acplan::cli
