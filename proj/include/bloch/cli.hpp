#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bloch::cli {

inline constexpr const char* kToolName = "bloch";
inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 2,
  kDegenerate = 3,
  kVerificationFailed = 4,
};

/// Runs the command line `args` (without the program name). The JSON report
/// goes to `out` unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bloch::cli
