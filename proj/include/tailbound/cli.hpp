// Command-line front end. Subcommands: bound, hull, fractional, verify, confidence.
#pragma once

#include <iosfwd>

namespace tailbound {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailure = 1;
inline constexpr int kExitUsage = 2;

/// Parses argv and runs one subcommand. Tables go to `out` (or to --out),
/// diagnostics to `err`. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tailbound
