#pragma once

#include <ostream>

namespace dcsarch {

enum ExitCode : int { kExitOk = 0, kExitInfeasible = 1, kExitUsage = 2, kExitBudget = 3 };

/// Entry point of the dcsarch tool. Primary output goes to `out`,
/// diagnostics and usage text to `err`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dcsarch
