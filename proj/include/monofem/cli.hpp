#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace monofem {

/// Exit codes of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitNumerical = 1, kExitUsage = 2 };

/// Runs `monofem <subcommand> [flags]`; `args` excludes the program name.
/// Subcommands: mesh, solve, study, validate.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace monofem
