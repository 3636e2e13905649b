#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace infill::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 2,
  kExitNumericError = 3,
};

/// Runs the command line `args` (args[0] is the program name). Results go to
/// `out` unless --out names a file; diagnostics and logs go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace infill::cli
