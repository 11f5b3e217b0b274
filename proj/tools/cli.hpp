#pragma once

#include <iosfwd>

namespace ramcong::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;  // Refuted certificate or failed assertion
inline constexpr int kExitUsage = 2;   // usage, config or input error

// Runs one subcommand: eval | valuation | certify | search | tau-verify | suite | conjecture.
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ramcong::cli
