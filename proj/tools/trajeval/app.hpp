#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace trajeval::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kPartial = 3,  // some metrics failed and --allow-partial was not given
};

/// Runs one command line (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace trajeval::cli
