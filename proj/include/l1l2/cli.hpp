#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace l1l2 {

/// Exit codes of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitFatal = 1, kExitPartial = 2 };

/// Runs the CLI on `args` (args[0] is the program name) and returns the exit code.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace l1l2
