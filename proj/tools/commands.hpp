#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kummod::cli {

enum Exit : int {
    exit_ok = 0,
    exit_check_failed = 1,
    exit_usage = 2,
    exit_refused = 3,
};

/// Runs one command line (without the program name). Reports go to out, usage and
/// failure payloads to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "2,3" or "1..3" or a mix such as "1,3..5".
std::vector<int> parse_int_list(const std::string& s);

}  // namespace kummod::cli
