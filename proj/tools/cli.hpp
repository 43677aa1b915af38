#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace typcell::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitFailure = 3;

/// Entry point of the `typcell` tool. `args[0]` is the program name. Returns
/// the process exit code; nothing here calls exit().
int run_cli(std::vector<std::string> args, std::ostream &out, std::ostream &err);

} // namespace typcell::cli
