#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qwoa {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitInvalidConfig = 2,
  kExitUnbracketed = 3,
  kExitIo = 4,
};

/// Entry point for the qwoa-bench tool. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace qwoa
