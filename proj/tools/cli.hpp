#pragma once

#include <iosfwd>

namespace pcs::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,      // bad flags, unreadable input, invalid config
  kNumeric = 3,    // a library stage failed on the data
  kTrials = 4,     // fewer than 90% of trial evaluations succeeded
};

/// Entry point shared by the binary and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pcs::cli
