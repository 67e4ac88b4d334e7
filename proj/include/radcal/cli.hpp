#pragma once

#include <iosfwd>

namespace radcal {

/// Process exit statuses of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitIo = 3,
  kExitInvalidInput = 4,
  kExitNotConverged = 5,
};

/// Entry point of the `radcal` tool: synth, calibrate, autolabel, eval.
/// Summaries go to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Applies RADCAL_LOG (trace, debug, info, warn, error, off) to the logger.
void configure_logging_from_env();

}  // namespace radcal
