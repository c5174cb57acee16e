#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gocta::cli {

enum ExitCode : int { kMember = 0, kNonMember = 1, kUsage = 2, kResource = 3 };

/// Runs the command line `args` (without the program name). Everything the
/// command prints goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gocta::cli
