#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bratteli {

enum ExitCode : int { exit_ok = 0, exit_fail = 1, exit_usage = 2, exit_unknown = 3 };

/// Runs one command; `args` excludes the program name.  Input documents come
/// from a path argument or from `in` when the path is absent or "-".
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in);

}  // namespace bratteli
