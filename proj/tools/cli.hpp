#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mothership::cli {

enum ExitCode : int {
    kOk = 0,
    kViolations = 1,
    kUsage = 2,
};

/// Runs one command line (args[0] is the program name). Results go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Applies MOTHERSHIP_LOG (trace, debug, info, warn, error, off; default
/// warn) to a logger writing to stderr.
void configure_logging();

}  // namespace mothership::cli
