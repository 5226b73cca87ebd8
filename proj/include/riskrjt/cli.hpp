#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace riskrjt {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitCheckFailed = 1,  // validation violations, disagreement, infeasible or unverified result
    kExitUsage = 2,        // unknown flags, malformed specs
    kExitError = 3,        // runtime failure (I/O, caps, solver launch)
};

/// Runs the tool with `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace riskrjt
