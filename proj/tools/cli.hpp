#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace spd::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2 };

/// Runs the command line `args` (args[0] is the program name). Normal output
/// goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "0.1..0.9" (step 0.1), "0.1..0.5:0.2", or a comma list "0.1,0.3".
std::vector<double> parse_densities(const std::string& arg);

}  // namespace spd::cli
