#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qfl::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kNumericalError = 2 };

// Runs one invocation; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qfl::cli
