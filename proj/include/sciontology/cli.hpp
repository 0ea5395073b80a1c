#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sciontology {

/// Process exit statuses of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitUsage = 2,
  kExitIo = 3,
};

/// Runs the command line `args` (args[0] is the program name), writing normal
/// output to `out` and diagnostics to `err`. Returns the exit status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sciontology
