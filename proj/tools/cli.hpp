// Entry point of the command-line tool, callable in-process so tests can
// drive the exact binary surface.  Returns the process exit code: 0 on
// success, 2 for configuration errors, 3 for numerical/domain failures.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qsteer::cli {

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace qsteer::cli
