#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace diffnet::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_error = 1,
    exit_not_converged = 2,
};

/*
 * Entry point shared by the executable and the tests. `args` excludes the
 * program name. Summaries and JSON results go to `out`; diagnostics go to
 * `err` as one JSON object per line.
 */
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace diffnet::cli
