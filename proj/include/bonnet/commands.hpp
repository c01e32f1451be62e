#pragma once

#include <ostream>

#include "bonnet/config.hpp"

namespace bonnet {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 1,
  kExitEarlyTermination = 2,
  kExitThresholdBreach = 3,
};

/// Each command writes its data product to `out` in the configured format and
/// diagnostics to `log`, and returns an ExitCode.
int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& log);
int cmd_painleve_test(const RunConfig& config, std::ostream& out, std::ostream& log);
int cmd_fields(const RunConfig& config, std::ostream& out, std::ostream& log);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& log);

/// Shortest decimal string that reads back to the same double.
std::string format_double(double value);

}  // namespace bonnet
