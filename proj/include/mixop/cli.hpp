#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mixop::cli {

/// Stable process exit codes.
enum ExitCode : int {
  kOk = 0,
  kMalformedInput = 2,
  kInvariantViolation = 3,
  kMassMismatch = 4,
  kInconclusive = 5,
  kNonexpansiveViolation = 6,
};

/// Runs the command line `args` (without the program name), writing results to
/// `out` and diagnostics to `err`. Returns one of ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mixop::cli
