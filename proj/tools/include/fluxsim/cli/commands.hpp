#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fluxsim::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 2,
  kNumericalFailure = 3,
};

/// Runs the command line `args` (without the program name). Normal output goes to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fluxsim::cli
