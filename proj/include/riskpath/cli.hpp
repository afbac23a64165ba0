#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace riskpath {

inline constexpr const char* kToolVersion = "0.1.0";

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kDomainFailure = 1;  // invalid path, not finished, unreachable
inline constexpr int kUsage = 2;          // bad flags or unparsable input files
inline constexpr int kBudgetExhausted = 3;
}  // namespace exit_code

/// Runs the command-line tool in-process. `args[0]` is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace riskpath
