#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cloudcost::cli {

enum ExitCode : int {
  kOk = 0,
  kValidationFailure = 1,
  kUsageError = 2,
  kMissingRate = 3,
};

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cloudcost::cli
