#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dhsic::cli {

/// Exit codes: 0 completed (whatever the decision), 1 unexpected failure,
/// 2 invalid input or configuration, 3 degenerate variance.
enum ExitCode : int { kOk = 0, kFailure = 1, kInputError = 2, kDegenerate = 3 };

/// Runs the command line `dhsic <args...>`; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dhsic::cli
