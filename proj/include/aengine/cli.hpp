#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace aengine::cli {

/// Process exit codes.
enum ExitStatus : int {
  kSuccess = 0,
  kMismatch = 1,
  kUsage = 2,
  kRuntime = 3,
};

/// Runs the command line `args` (without the program name), writing to
/// `out`/`err`. Returns the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace aengine::cli
