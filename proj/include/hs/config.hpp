// Experiment configuration: a strict key = value text format with sections.
// Unknown sections or keys are errors, as are missing required entries.
#pragma once

#include "hs/grid.hpp"
#include "hs/initial_data.hpp"
#include "hs/potential.hpp"
#include "hs/propagator.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hs {

enum class ExperimentKind { evolve, scatter, roundtrip, morawetz, sweep, check_potential };

const char* kind_name(ExperimentKind k);
std::optional<ExperimentKind> kind_from_name(const std::string& name);

struct CheckThresholds {
  double mass_drift = 1e-11;
  double energy_identity = 1e-10;
  double boundary_mass = 1e-6;
  double mass_residual = 1e-10;
  double scatter_converged = 1e-4;
  double energy_residual = 1e-3;
  double roundtrip_h1 = 1e-3;
  double morawetz_integrand = 1e-8;  // times the problem scale
  double morawetz_chain = 1e-6;      // times the problem scale
  double dilation_step = 1e-6;       // times the problem scale
};

struct PotentialConfig {
  PotentialSpec spec;
  double p1 = 0.0;  // 0 = derive a sensible default when checking
  double p2 = 0.0;
  double alpha = 2.0;
  double a = 1.0;
  int mollify_j = 0;
  std::string table_file;
};

struct ExperimentConfig {
  int schema_version = 1;
  GridSpec grid;
  PotentialConfig potential;
  InitialDataSpec initial;
  bool seed_given = false;
  EvolveConfig evolve;
  ExperimentKind kind = ExperimentKind::evolve;
  std::string output_dir = "out";
  std::string write_fields = "endpoints";  // none | endpoints | all

  std::vector<double> checkpoints;  // scatter
  double roundtrip_T = 10.0;
  double morawetz_t1 = 0.0;
  double morawetz_t2 = 0.0;
  double morawetz_sigma = -1.0;  // -1 = grid spacing
  double window_epsilon = -1.0;  // > 0 enables the window search in evolve
  double window_length = 0.0;
  double decay_r = 0.0;          // > 2 enables the decay fit in evolve

  ExperimentKind sweep_base = ExperimentKind::evolve;
  std::vector<double> sweep_gamma;
  std::vector<double> sweep_C;
  std::vector<double> sweep_amplitude;

  CheckThresholds checks;
};

struct ConfigError : std::runtime_error {
  int line;
  std::string field;
  ConfigError(int line_, std::string field_, const std::string& what);
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

}  // namespace hs
