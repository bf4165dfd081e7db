#pragma once

#include <iosfwd>

namespace tritrophic::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kNoConvergence = 3,
  kConstraintViolation = 4,
};

/// Entry point of the command-line tool; writes reports to `out` and
/// diagnostics to `err` and returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tritrophic::cli
