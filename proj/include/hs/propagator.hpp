// Time evolution: exact free propagator, Strang-split integrator for the
// full nonlocal flow, and a Picard iterator on the integral equation for
// cross-validation.
#pragma once

#include "hs/grid.hpp"
#include "hs/potential.hpp"

#include <vector>

namespace hs {

enum class Scheme { strang, picard };

// Per-step diagnostic knobs. Negative lengths mean "derive from the grid"
// (dilation_sigma -> h, boundary_band -> 2h). split_alpha / split_a feed the
// cube-decomposed norm of the internal part.
struct DiagnosticsConfig {
  double dilation_sigma = -1.0;
  double split_alpha = 2.0;
  double split_a = 1.0;
  double boundary_band = -1.0;
  double boundary_tol = 1e-6;
};

struct EvolveConfig {
  double dt = 0.0;          // positive step size; direction from t_start/t_end
  double t_start = 0.0;
  double t_end = 0.0;
  int sample_stride = 1;    // keep every k-th snapshot (first/last always kept)
  Scheme scheme = Scheme::strang;
  DiagnosticsConfig diag;
};

struct DiagnosticsRow {
  double t = 0.0;
  double mass = 0.0;          // ||u||_2^2
  double kinetic = 0.0;       // (1/2)||grad u||_2^2
  double hartree = 0.0;       // (1/2)<rho, V*rho>
  double energy = 0.0;        // kinetic + hartree
  double dilation = 0.0;      // Im<u, grad h . grad u>, h = sqrt(x^2+sigma^2)
  double l4 = 0.0;
  double l6 = 0.0;
  double internal_mass = 0.0; // mass inside radius R(t) = |t| log |t| (clamped)
  double external_mass = 0.0;
  double internal_cube = 0.0; // ||u_<; l^{alpha+4}(L^2)|| with edge a(2n)^{-1/2}
};

struct Trajectory {
  GridSpec grid;
  DiagnosticsConfig diag;
  double dt = 0.0;
  std::vector<Field> snapshots;
  std::vector<DiagnosticsRow> rows;  // one per step, including both endpoints
  double boundary_mass_max = 0.0;    // peak mass fraction within the boundary band
  double boundary_first_exceed = -1.0;  // first time the fraction broke the tolerance
  double cube_edge = 0.0;            // actual (grid-aligned) cube edge used
  bool cube_edge_clamped = false;

  const Field& initial() const { return snapshots.front(); }
  const Field& final() const { return snapshots.back(); }
  // Snapshot nearest to time t; throws if off by more than half a step.
  const Field& snapshot_at(double t) const;
};

// u -> exp(i t Laplacian / 2) u, exact in the multiplier domain.
Field free_propagate(const Field& f, double t);

// One exact potential kick: u <- u exp(-i dt (V * |u|^2)).
Field nonlinear_phase_step(const Field& f, const PotentialOnGrid& pot, double dt);

// Strang-split evolution with per-step diagnostics. Aborts (throws) when the
// state stops being finite. Backward integration (t_end < t_start) uses the
// same scheme with negated steps.
Trajectory strang_evolve(const Field& u0, const PotentialOnGrid& pot, const EvolveConfig& cfg);

// Endpoint-only evolution with a light conservation monitor; used where only
// the final state matters (wave-operator transport).
struct EndpointMonitor {
  double mass_drift_max = 0.0;
  double kinetic_max = 0.0;
  long long steps = 0;
};
Field evolve_endpoint(const Field& u0, const PotentialOnGrid& pot, double dt, double t_target,
                      EndpointMonitor* monitor = nullptr);

struct PicardResult {
  Field final_state;
  std::vector<double> iterate_deltas;  // sup-in-time L^2 successive differences
  bool diverged = false;
};

// Fixed-point iteration on u(t) = U(t)u0 - i int_0^t U(t-s) f(u(s)) ds with
// trapezoidal quadrature at spacing dt_quad, starting from the free flow.
PicardResult picard_iterate(const Field& u0, const PotentialOnGrid& pot, double t_final,
                            int n_iter, double dt_quad);

}  // namespace hs
