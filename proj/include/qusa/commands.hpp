#pragma once

#include <ostream>
#include <string>

#include "qusa/config.hpp"

namespace qusa {

/// The CLI command each run kind belongs to: solve, simulate, or sweep.
std::string command_for_kind(RunKindConfig kind);

/// Enumerates solutions and writes solutions.txt plus the manifest.
/// Returns 0 when satisfiable, 1 when not.
int cmd_solve(const RunConfig& cfg, std::ostream& log);

/// Runs the configured annealer or propagator and writes its CSV artifacts
/// plus the manifest. Returns 0.
int cmd_simulate(const RunConfig& cfg, std::ostream& log);

/// Runs the configured interval sweep; writes per-point CSVs, the fit
/// report JSON, and the manifest. Returns 0.
int cmd_sweep(const RunConfig& cfg, std::ostream& log);

/// Checks the kind belongs to `command`, then dispatches. `log` receives
/// one line per emitted file.
int run_command(const std::string& command, const RunConfig& cfg, std::ostream& log);

}  // namespace qusa
