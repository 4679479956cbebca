#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cgra {

/// Exit statuses of the command-line front end.
enum ExitStatus : int { exit_ok = 0, exit_error = 1, exit_usage = 2 };

/// Runs one command line (args[0] is the program name).  Regular output goes
/// to `out`, diagnostics to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_command(int argc, const char* const* argv);

} // namespace cgra
