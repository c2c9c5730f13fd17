#pragma once

#include "birkhoff/harness/config.hpp"
#include "birkhoff/harness/report.hpp"

namespace birkhoff::harness {

/// Replaces the seed with BIRKHOFF_SEED when that variable is set and the
/// seed did not come from the command line. Throws ConfigError on a value
/// that is not an unsigned integer.
void apply_seed_environment(ExperimentConfig& cfg);

/// Validates (ConfigError before any sampling), runs, and writes
/// <out_dir>/<experiment>_report.json plus raw CSVs when out_dir is set.
/// Failures after validation are caught and recorded in the report's error
/// field alongside whatever verdicts were already reached.
RunReport run_experiment(const ExperimentConfig& cfg);

/// Process exit status for a report: 0 iff report.passed().
int exit_status(const RunReport& report);

}  // namespace birkhoff::harness
