#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cfgprint::cli {

/// Exit statuses: 0 success (empty results included), 1 operational failure
/// such as a bad configuration or an incompatible index, 2 usage or I/O
/// error.
enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

/// Runs the command line tool. `args` excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err);

} // namespace cfgprint::cli
