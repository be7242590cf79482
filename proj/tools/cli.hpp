#pragma once

// The linv command line: `validate` and `compute`.  run_cli is the whole
// program; main() only forwards argv and the standard streams.

#include <iosfwd>

namespace linv::cli {

enum ExitCode : int {
  kOk = 0,
  kValidationFailure = 1,
  kSingularRefinement = 2,
  kPrecisionShortfall = 3,
};

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace linv::cli
