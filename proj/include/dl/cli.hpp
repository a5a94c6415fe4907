#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dl {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidInput = 1;
inline constexpr int kExitBudget = 2;
inline constexpr int kExitUsage = 64;

/// Runs the command line tool. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dl
