#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hybridloc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitConsistency = 3;

/// Runs the command line `args` (without the program name). Normal output
/// goes to `out`, diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hybridloc::cli
