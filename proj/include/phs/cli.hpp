#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace phs::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;     // usage, parse or I/O error
inline constexpr int kExitFailure = 2;   // singular system or violated asserted bound

// Runs one subcommand; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace phs::cli
