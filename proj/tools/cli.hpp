#ifndef SKEWMIX_TOOLS_CLI_HPP
#define SKEWMIX_TOOLS_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace skewmix::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

/// Runs one command line. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace skewmix::cli

#endif  // SKEWMIX_TOOLS_CLI_HPP
