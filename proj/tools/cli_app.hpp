#pragma once

#include <string>
#include <vector>

namespace cubiq_cli {

/// Runs the command line tool on the given arguments (argv[0] excluded).
/// Exit codes: 0 success, 1 input error, 2 budget exhausted.
int dispatch(const std::vector<std::string>& args);

}  // namespace cubiq_cli
