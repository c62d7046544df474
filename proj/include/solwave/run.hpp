#pragma once

#include <iosfwd>

#include "solwave/config.hpp"

namespace solwave {

/// Exit statuses of run().
enum ExitStatus : int { exit_pass = 0, exit_failed = 1, exit_usage = 2 };

/// Dispatches the configured command, writes its artifacts (config echo,
/// JSON records, CSV fields and tables, plot data) under cfg.output_dir and
/// returns exit_pass only if every verification of the command passed.
/// Progress lines go to `log` unless `quiet`.
int run(const RunConfig& cfg, std::ostream& log, bool quiet = false);

}  // namespace solwave
