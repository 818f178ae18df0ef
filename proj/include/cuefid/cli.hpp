#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cuefid {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // validation, gate or metric failure
inline constexpr int kExitUsage = 2;

inline constexpr const char* kVersion = "0.1.0";

// Runs one command line (without the program name). Diagnostics go to `err`,
// command output that is not written to a file goes to `out`.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace cuefid
