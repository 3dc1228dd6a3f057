#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gridpos::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kError = 1;
inline constexpr int kVerificationFailed = 2;
inline constexpr int kBudgetExhausted = 3;
inline constexpr int kUsage = 64;

/// Runs one command line (without the program name). Reports go to `out`
/// unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gridpos::cli
