#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace nnls::cli {

enum ExitCode { exit_ok = 0, exit_config = 2, exit_diagnostic = 3, exit_pipeline = 4 };

const std::vector<std::string>& command_names();

/// Runs one subcommand; returns the process exit code. Writes a message to stderr on failure.
int run_command(const std::string& name, const RunConfig& cfg);

/// Least-squares slope of log|y| against log t.
double loglog_slope(const std::vector<double>& t, const std::vector<double>& y);

}  // namespace nnls::cli
