#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wigneg {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitRuntime = 3 };

/// Entry point of the `wigneg` tool. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Worker count used when --workers is absent: $WIGNEG_WORKERS if it holds a
/// positive integer, otherwise the hardware concurrency.
unsigned default_workers();

}  // namespace wigneg
