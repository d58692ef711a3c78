#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pdw::cli {

enum ExitCode { kPass = 0, kCheckFailure = 1, kUsage = 2, kDomain = 3 };

// Runs the command line (without the program name). Output goes to `out`
// unless --out names a file; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pdw::cli
