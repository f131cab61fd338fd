#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace best2cop::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInfeasible = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitGuard = 3;

/// Runs one command line (without the program name). Payload goes to `out`,
/// diagnostics and usage to `err`. Returns the process exit code.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace best2cop::cli
