#pragma once

#include <iosfwd>

namespace hnw {

/// Exit codes of the `hnw` tool.
enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitRuntime = 2 };

/// Entry point of the command-line tool (subcommands generate, run, sweep, stats).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hnw
