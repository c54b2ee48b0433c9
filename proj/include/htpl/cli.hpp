#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace htpl {

/// Exit codes shared by every verb.
enum ExitCode : int {
    kExitOk = 0,
    kExitNegative = 1,
    kExitInputError = 2,
    kExitBudget = 3,
};

/// Runs the command line `args` (without the program name). Reports go to
/// `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace htpl
