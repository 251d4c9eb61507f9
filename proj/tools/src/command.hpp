#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace flatrat::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kResourceLimit = 2 };

/// Runs one command line (without the program name). Writes a single JSON
/// record (or its human rendering) to `out` and diagnostics to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace flatrat::cli
