#pragma once

#include <iosfwd>

namespace curvetrace {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitBadArguments = 1,
  kExitBadProblemFile = 2,
  kExitUnsolvable = 3,
};

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace curvetrace
