// extern "C" surface over the core library: opaque handles, status codes,
// thread-local error messages.
#include "hartreescatter.h"

#include "hs/config.hpp"
#include "hs/experiments.hpp"
#include "hs/field_io.hpp"
#include "hs/initial_data.hpp"
#include "hs/norms.hpp"
#include "hs/observables.hpp"
#include "hs/potential.hpp"
#include "hs/propagator.hpp"
#include "hs/scattering.hpp"

#include <cstring>
#include <stdexcept>
#include <string>

struct hs_grid {
  hs::GridSpec g;
};
struct hs_field {
  hs::Field f;
};
struct hs_potential {
  hs::PotentialOnGrid p;
};
struct hs_trajectory {
  hs::Trajectory t;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

template <typename Fn>
hs_status guarded(Fn&& fn) {
  try {
    fn();
    return HS_OK;
  } catch (const hs::ConfigError& e) {
    set_error(e.what());
    return HS_ERR_CONFIG;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return HS_ERR_INVALID_ARGUMENT;
  } catch (const std::runtime_error& e) {
    set_error(e.what());
    return HS_ERR_IO;
  } catch (const std::exception& e) {
    set_error(e.what());
    return HS_ERR_INTERNAL;
  }
}

hs_status require(bool cond, const char* msg) {
  if (cond) return HS_OK;
  set_error(msg);
  return HS_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* hs_version(void) { return "0.1.0"; }

const char* hs_status_name(hs_status status) {
  switch (status) {
    case HS_OK: return "ok";
    case HS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case HS_ERR_GRID_MISMATCH: return "grid mismatch";
    case HS_ERR_IO: return "io error";
    case HS_ERR_CONFIG: return "config error";
    case HS_ERR_NUMERIC: return "numeric failure";
    case HS_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

const char* hs_last_error(void) { return g_last_error.c_str(); }

/* ---- grids -------------------------------------------------------- */

hs_status hs_grid_create(int dim, int points_per_axis, double half_length, hs_grid** out) {
  if (hs_status s = require(out != nullptr, "hs_grid_create: out is null")) return s;
  return guarded([&] { *out = new hs_grid{hs::make_grid(dim, points_per_axis, half_length)}; });
}

void hs_grid_free(hs_grid* grid) { delete grid; }
int hs_grid_dim(const hs_grid* grid) { return grid ? grid->g.dim : 0; }
int hs_grid_points_per_axis(const hs_grid* grid) { return grid ? grid->g.points_per_axis : 0; }
double hs_grid_half_length(const hs_grid* grid) { return grid ? grid->g.half_length : 0.0; }
double hs_grid_spacing(const hs_grid* grid) { return grid ? grid->g.spacing() : 0.0; }
int64_t hs_grid_total_points(const hs_grid* grid) {
  return grid ? static_cast<int64_t>(grid->g.total_points()) : 0;
}

/* ---- fields ------------------------------------------------------- */

hs_status hs_field_zero(const hs_grid* grid, hs_field** out) {
  if (hs_status s = require(grid && out, "hs_field_zero: null argument")) return s;
  return guarded([&] { *out = new hs_field{hs::Field::zero(grid->g)}; });
}

hs_status hs_field_gaussian(const hs_grid* grid, double amplitude, double width,
                            const double* center, const double* velocity, hs_field** out) {
  if (hs_status s = require(grid && out, "hs_field_gaussian: null argument")) return s;
  return guarded([&] {
    hs::InitialDataSpec spec;
    spec.kind = hs::InitialDataKind::gaussian;
    spec.amplitude = amplitude;
    spec.width = width;
    for (int a = 0; a < grid->g.dim; ++a) {
      if (center) spec.center[a] = center[a];
      if (velocity) spec.velocity[a] = velocity[a];
    }
    *out = new hs_field{hs::generate_initial_data(spec, grid->g)};
  });
}

hs_status hs_field_random(const hs_grid* grid, uint64_t seed, double band, double l2_norm,
                          hs_field** out) {
  if (hs_status s = require(grid && out, "hs_field_random: null argument")) return s;
  return guarded([&] {
    hs::InitialDataSpec spec;
    spec.kind = hs::InitialDataKind::random_band_limited;
    spec.seed = seed;
    spec.band = band;
    spec.amplitude = l2_norm;
    *out = new hs_field{hs::generate_initial_data(spec, grid->g)};
  });
}

hs_status hs_field_from_values(const hs_grid* grid, const double* interleaved,
                               int64_t count_complex, double time, hs_field** out) {
  if (hs_status s = require(grid && interleaved && out, "hs_field_from_values: null argument"))
    return s;
  if (count_complex != static_cast<int64_t>(grid->g.total_points())) {
    set_error("hs_field_from_values: value count does not match the grid");
    return HS_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    hs::Field f = hs::Field::zero(grid->g, time);
    for (int64_t i = 0; i < count_complex; ++i)
      f.values[static_cast<std::size_t>(i)] =
          hs::cplx{interleaved[2 * i], interleaved[2 * i + 1]};
    *out = new hs_field{std::move(f)};
  });
}

hs_status hs_field_copy_values(const hs_field* field, double* interleaved,
                               int64_t capacity_complex) {
  if (hs_status s = require(field && interleaved, "hs_field_copy_values: null argument"))
    return s;
  const auto total = static_cast<int64_t>(field->f.values.size());
  if (capacity_complex < total) {
    set_error("hs_field_copy_values: buffer too small");
    return HS_ERR_INVALID_ARGUMENT;
  }
  for (int64_t i = 0; i < total; ++i) {
    interleaved[2 * i] = field->f.values[static_cast<std::size_t>(i)].real();
    interleaved[2 * i + 1] = field->f.values[static_cast<std::size_t>(i)].imag();
  }
  return HS_OK;
}

hs_status hs_field_read(const char* path, hs_field** out) {
  if (hs_status s = require(path && out, "hs_field_read: null argument")) return s;
  return guarded([&] { *out = new hs_field{hs::read_field(path)}; });
}

hs_status hs_field_write(const hs_field* field, const char* path) {
  if (hs_status s = require(field && path, "hs_field_write: null argument")) return s;
  return guarded([&] { hs::write_field(field->f, path); });
}

void hs_field_free(hs_field* field) { delete field; }
double hs_field_time(const hs_field* field) { return field ? field->f.time : 0.0; }

hs_status hs_field_lp_norm(const hs_field* field, double r, double* out) {
  if (hs_status s = require(field && out, "hs_field_lp_norm: null argument")) return s;
  return guarded([&] { *out = hs::lp_norm(field->f, r); });
}

hs_status hs_field_h1_norm(const hs_field* field, double* out) {
  if (hs_status s = require(field && out, "hs_field_h1_norm: null argument")) return s;
  return guarded([&] { *out = hs::h1_norm(field->f); });
}

hs_status hs_field_mass(const hs_field* field, double* out) {
  if (hs_status s = require(field && out, "hs_field_mass: null argument")) return s;
  return guarded([&] { *out = hs::mass(field->f); });
}

/* ---- potentials ---------------------------------------------------- */

hs_status hs_potential_zero(const hs_grid* grid, hs_potential** out) {
  if (hs_status s = require(grid && out, "hs_potential_zero: null argument")) return s;
  return guarded([&] {
    *out = new hs_potential{hs::sample_potential(hs::PotentialSpec::zero_potential(), grid->g)};
  });
}

hs_status hs_potential_inverse_power(const hs_grid* grid, double C, double gamma,
                                     double truncate_outer, hs_potential** out) {
  if (hs_status s = require(grid && out, "hs_potential_inverse_power: null argument")) return s;
  return guarded([&] {
    hs::PotentialSpec spec = hs::PotentialSpec::inverse_power(C, gamma);
    spec.truncate_outer = truncate_outer;
    *out = new hs_potential{hs::sample_potential(spec, grid->g)};
  });
}

void hs_potential_free(hs_potential* potential) { delete potential; }

hs_status hs_potential_convolve(const hs_potential* potential, const hs_field* rho,
                                hs_field** out) {
  if (hs_status s = require(potential && rho && out, "hs_potential_convolve: null argument"))
    return s;
  if (!(rho->f.grid == potential->p.grid)) {
    set_error("hs_potential_convolve: field and potential grids differ");
    return HS_ERR_GRID_MISMATCH;
  }
  return guarded(
      [&] { *out = new hs_field{hs::convolve_density(potential->p, rho->f, false)}; });
}

hs_status hs_energy(const hs_field* field, const hs_potential* potential, double* total,
                    double* kinetic, double* interaction) {
  if (hs_status s = require(field && potential, "hs_energy: null argument")) return s;
  if (!(field->f.grid == potential->p.grid)) {
    set_error("hs_energy: field and potential grids differ");
    return HS_ERR_GRID_MISMATCH;
  }
  return guarded([&] {
    const double kin = hs::kinetic_energy(field->f);
    const double pot = hs::hartree_term(field->f, potential->p);
    if (kinetic) *kinetic = kin;
    if (interaction) *interaction = pot;
    if (total) *total = kin + pot;
  });
}

/* ---- evolution ------------------------------------------------------ */

hs_status hs_free_propagate(const hs_field* field, double t, hs_field** out) {
  if (hs_status s = require(field && out, "hs_free_propagate: null argument")) return s;
  return guarded([&] { *out = new hs_field{hs::free_propagate(field->f, t)}; });
}

hs_status hs_strang_evolve(const hs_field* initial, const hs_potential* potential, double dt,
                           double t_end, int stride, hs_trajectory** out) {
  if (hs_status s = require(initial && potential && out, "hs_strang_evolve: null argument"))
    return s;
  if (!(initial->f.grid == potential->p.grid)) {
    set_error("hs_strang_evolve: field and potential grids differ");
    return HS_ERR_GRID_MISMATCH;
  }
  return guarded([&] {
    hs::EvolveConfig cfg;
    cfg.dt = dt;
    cfg.t_start = initial->f.time;
    cfg.t_end = t_end;
    cfg.sample_stride = stride;
    *out = new hs_trajectory{hs::strang_evolve(initial->f, potential->p, cfg)};
  });
}

void hs_trajectory_free(hs_trajectory* trajectory) { delete trajectory; }

int hs_trajectory_snapshot_count(const hs_trajectory* trajectory) {
  return trajectory ? static_cast<int>(trajectory->t.snapshots.size()) : 0;
}

hs_status hs_trajectory_snapshot(const hs_trajectory* trajectory, int index, hs_field** out) {
  if (hs_status s = require(trajectory && out, "hs_trajectory_snapshot: null argument")) return s;
  if (index < 0 || index >= static_cast<int>(trajectory->t.snapshots.size())) {
    set_error("hs_trajectory_snapshot: index out of range");
    return HS_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    *out = new hs_field{trajectory->t.snapshots[static_cast<std::size_t>(index)]};
  });
}

hs_status hs_trajectory_write_csv(const hs_trajectory* trajectory, const char* path) {
  if (hs_status s = require(trajectory && path, "hs_trajectory_write_csv: null argument"))
    return s;
  return guarded([&] { hs::write_diagnostics_csv(trajectory->t, path); });
}

hs_status hs_wave_operator(const hs_field* u_plus, const hs_potential* potential, double T,
                           double dt, hs_field** out) {
  if (hs_status s = require(u_plus && potential && out, "hs_wave_operator: null argument"))
    return s;
  if (!(u_plus->f.grid == potential->p.grid)) {
    set_error("hs_wave_operator: field and potential grids differ");
    return HS_ERR_GRID_MISMATCH;
  }
  return guarded([&] { *out = new hs_field{hs::wave_operator(u_plus->f, potential->p, T, dt)}; });
}

/* ---- experiment harness --------------------------------------------- */

hs_status hs_run_config(const char* config_path, const char* out_dir, int threads, int64_t seed,
                        const char* expected_kind, int* checks_passed) {
  if (hs_status s = require(config_path != nullptr, "hs_run_config: config_path is null"))
    return s;
  hs::ExperimentConfig cfg;
  try {
    cfg = hs::parse_config_file(config_path);
  } catch (const hs::ConfigError& e) {
    set_error(e.what());
    return HS_ERR_CONFIG;
  } catch (const std::exception& e) {
    set_error(e.what());
    return HS_ERR_IO;
  }

  hs::RunOptions opts;
  if (out_dir) opts.out_override = out_dir;
  opts.threads = threads;
  opts.seed_override = seed;
  if (expected_kind) opts.expected_kind = expected_kind;

  int code = 2;
  hs_status status = guarded([&] { code = hs::run_experiment(std::move(cfg), opts); });
  if (status != HS_OK) return status;
  if (code == 2) {
    set_error("experiment failed; see error.json in the output directory");
    return HS_ERR_NUMERIC;
  }
  if (checks_passed) *checks_passed = code == 0 ? 1 : 0;
  return HS_OK;
}

}  // extern "C"
