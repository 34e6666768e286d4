#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pyrafuse {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2 };

/**
 * Runs the command-line tool. `args` excludes the program name. Data goes to
 * files or `out`; logs and usage text go to `err`.
 */
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pyrafuse
