#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vponset::cli {

/// Process exit codes.
enum ExitCode : int
{
  kOk = 0,
  kUsage = 1,   // bad flags or invalid configuration
  kIoFailure = 2, // unreadable, missing or malformed files
};

/// Runs the command line `args` (args[0] is the program name) and returns
/// the exit code. Results go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace vponset::cli
