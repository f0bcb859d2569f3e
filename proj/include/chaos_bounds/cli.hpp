#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chaos_bounds {

/// Exit codes of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitDomain = 2, kExitVerification = 3 };

/// Default master seed when neither --seed nor CHAOS_BOUNDS_SEED is given.
inline constexpr unsigned long long kDefaultSeed = 0xC0FFEE;

/// Runs the CLI on `args` (program name excluded). Reports go to `out`
/// unless --output names a file; diagnostics go to `err`.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace chaos_bounds
