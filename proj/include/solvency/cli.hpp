#pragma once

#include <iosfwd>

namespace solvency {

enum ExitCode : int {
  exit_ok = 0,
  exit_usage = 1,
  exit_model = 2,
  exit_resource = 3,
  exit_degenerate = 4,
};

/// Runs one CLI invocation. The JSON result goes to `out`, diagnostics and timing to `err`.
/// The thread count for `simulate` is read from SOLVENCY_THREADS.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace solvency
