#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace aigac::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_parse = 2,
    exit_partial = 3,
};

/// Entry point of the aigac command line; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace aigac::cli
