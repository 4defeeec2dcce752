#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dpk::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;        // unexpected error, bench check failures
inline constexpr int kExitParse = 2;          // unreadable input or invalid argument
inline constexpr int kExitNotPd = 3;          // instance is not positive definite
inline constexpr int kExitBudget = 4;         // enumeration budget exceeded

/// Runs the command line `args` (without the program name). JSON documents
/// go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dpk::cli
