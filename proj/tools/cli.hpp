#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qdich::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kInternalError = 2 };

/// Runs one command. args excludes the program name. Machine-readable output
/// goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qdich::cli
