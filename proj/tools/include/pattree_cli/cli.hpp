#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pattree::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kData = 2,
  kIntegrity = 3,
  kGuard = 4,
};

/// Runs the command line `args` (args[0] is the program name) with the given
/// streams standing in for stdin, stdout and stderr, and returns the exit
/// code. Library errors map to codes: UsageError 1, DataError 2,
/// IntegrityError 3, GuardError 4.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

/// Least-squares slope of log(time) against log(n).
double log_log_slope(const std::vector<double>& n, const std::vector<double>& seconds);

}  // namespace pattree::cli
