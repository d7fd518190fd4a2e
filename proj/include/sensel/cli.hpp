#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sensel::cli {

// Exit codes are part of the command-line contract.
inline constexpr int kOk = 0;
inline constexpr int kInvalid = 1;
inline constexpr int kGuard = 2;
inline constexpr int kIo = 3;

/// Runs the tool with `args` (program name excluded), writing human-readable
/// output to `out` and diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sensel::cli
