#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rlam::cli {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Runs the command line `args` (without the program name). Results go to
/// files and `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Library version string.
const char* version();

}  // namespace rlam::cli
