// Experiment orchestration: runs a parsed configuration, writes diagnostics
// CSV / report JSON / field snapshots, and evaluates the configured checks.
#pragma once

#include "hs/config.hpp"

#include <string>

namespace hs {

struct RunOptions {
  std::string out_override;    // replaces the config output_dir when nonempty
  int threads = 0;             // sweep pool size; 0 = HS_THREADS env or 1
  long long seed_override = -1;
  std::string expected_kind;   // CLI subcommand; must match the config kind
  bool quiet = false;          // suppress per-check stdout lines
};

// Exit codes: 0 all checks passed, 1 some check failed, 2 configuration or
// runtime error (an error.json is left in the output directory when known).
int run_config_file(const std::string& path, const RunOptions& opts);
int run_experiment(ExperimentConfig cfg, const RunOptions& opts);

// CSV schema shared by every experiment writing per-step diagnostics.
void write_diagnostics_csv(const Trajectory& traj, const std::string& path);

}  // namespace hs
