#ifndef PSTAT_TOOLS_CLI_HPP_
#define PSTAT_TOOLS_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace pstat::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitPartial = 2;

inline constexpr const char* kToolVersion = "0.3.0";

// Runs one invocation. args[0] is the program name. Never throws; errors are
// written to err and mapped to the exit code contract (0 ok, 1 error,
// 2 partial success).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pstat::cli

#endif  // PSTAT_TOOLS_CLI_HPP_
