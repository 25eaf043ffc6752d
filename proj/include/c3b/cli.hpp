#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace c3b::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInadmissible = 3;
inline constexpr int kExitCheckFailed = 4;

/// Runs one command line (without the program name). Results go to `out`
/// (or to the --out file), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace c3b::cli
