#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cofix::cli {

/// Runs the command-line tool. Returns the process exit code:
/// 0 for pass, 1 for a failing verdict, 2 for input or validation errors.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace cofix::cli
