#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace freqmon::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kValidation = 2,
  kInternal = 3,
};

/// Runs one invocation. `args` excludes the program name; input "-" reads
/// from `in`. Diagnostics go to `err` as a single line.
int run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err);

}  // namespace freqmon::cli
