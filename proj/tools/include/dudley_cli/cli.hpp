#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dudley::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kPrecondition = 2,
  kGeometry = 3,
};

/// Runs the dudley command line; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dudley::cli
