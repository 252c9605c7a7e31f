// Functionals of the solution: conserved quantities, dilation/Morawetz
// monitoring, internal/external splitting, propagation and decay checks.
#pragma once

#include "hs/propagator.hpp"

#include <optional>
#include <vector>

namespace hs {

double kinetic_energy(const Field& u);                       // (1/2)||grad u||_2^2
double hartree_term(const Field& u, const PotentialOnGrid&); // (1/2)<rho, V*rho>
double energy(const Field& u, const PotentialOnGrid&);       // kinetic + hartree

// Im <u, grad h . grad u> with h = sqrt(|x|^2 + sigma^2); sigma = 0 uses the
// unit radial direction with the origin cell weighted zero.
double dilation_quantity(const Field& u, double sigma);

// Componentwise convolution kernel built from the sampled radial derivative
// of V, K(d) = (d/|d|) v'(|d|). Convolving the density with K realizes
// V * grad(rho) in a form whose symmetrization keeps every pair term of the
// monitored functional nonnegative for nonincreasing radial V.
struct MorawetzKernel {
  GridSpec grid;
  std::vector<std::vector<cplx>> mult;  // one multiplier per axis
};
MorawetzKernel make_morawetz_kernel(const PotentialOnGrid& pot);

// -integral of rho(x) xhat . (V * grad rho) dx at fixed time.
double morawetz_integrand(const Field& u, const MorawetzKernel& kernel);
double morawetz_integrand(const Field& u, const PotentialOnGrid& pot);

// Alternate route applying the spectral derivative to the density instead of
// the kernel; agrees with the kernel route in the continuum limit and is kept
// as a discretization diagnostic.
double morawetz_integrand_spectral(const Field& u, const PotentialOnGrid& pot);

struct MorawetzReport {
  double t1 = 0.0, t2 = 0.0, sigma = 0.0;
  double lhs = 0.0;           // time integral of the integrand
  double rhs_boundary = 0.0;  // D_sigma(t2) - D_sigma(t1)
  double rhs_bound = 0.0;     // 2 ||u||_2 sup_t ||grad u||_2
  double integrand_min = 0.0;
  double scale = 0.0;         // ||u||_2 sup_t ||grad u||_2 (tolerance scale)
  int monotonicity_violations = 0;
  std::vector<double> sample_times;
  std::vector<double> integrand_values;
  // D_sigma trend at both endpoints for sigma in {2h, h, h/2}.
  std::vector<double> dilation_sigmas;
  std::vector<double> dilation_t1;
  std::vector<double> dilation_t2;
};

// Evaluates the inequality chain lhs <= rhs_boundary <= rhs_bound over
// [t1, t2] from trajectory snapshots (at least 8 required in the interval)
// and counts per-step decreases of the dilation diagnostic beyond
// step_tol * scale.
MorawetzReport morawetz_check(const Trajectory& traj, const PotentialOnGrid& pot, double t1,
                              double t2, double sigma, double step_tol = 1e-6);

// Sharp split at radius R(t) = |t| log |t|, clamped to [h, L sqrt(n)].
double split_radius(const GridSpec& g, double t);
struct SplitFields {
  Field internal_part;  // |x| < R
  Field external_part;  // |x| >= R
  double radius = 0.0;
  bool clamped = false;
};
SplitFields split_field(const Field& u, double t);

struct PropagationReport {
  double R = 0.0;
  double weighted_initial = 0.0;  // integral of (1 ^ |x|/R) |u0|^2
  double grad_sup = 0.0;
  std::vector<double> times;
  std::vector<double> lhs;  // external mass at radius R
  std::vector<double> rhs;
  bool pass = false;
};
// External-mass transport bound against the initial weighted mass plus the
// R^{-1} |t| ||u||_2 sup||grad u||_2 drift term.
PropagationReport propagation_check(const Field& u0, const Trajectory& traj, double R,
                                    double tol_scale = 1e-8);

// Weighted time integral of the cube-counting norm of the internal part:
// int (t log t + a)^{-1} ||u_<(t); l^{alpha+4}(L^2)||^{alpha+4} dt.
// Uses the per-step diagnostics; the trajectory must have been produced with
// matching split parameters.
double internal_norm_integral(const Trajectory& traj, double alpha, double a, double t1,
                              double t2);

struct WindowResult {
  double t2 = 0.0;           // right edge of the first admissible window
  int window_index = 0;      // 1-based
  double window_integral = 0.0;
  double measured_M = 0.0;   // weighted integral over the whole horizon
  double log_bound = 0.0;    // log of the a-priori bound on t2
  double bound = 0.0;        // exp(log_bound), infinity when it overflows
};
// Scans windows [t1 + (j-1) l, t1 + j l] for the first one whose integral of
// ||u_<; l^{alpha+4}(L^2)||^{alpha+4} falls below eps.
std::optional<WindowResult> window_search(const Trajectory& traj, double eps, double ell,
                                          double alpha);

struct DecayReport {
  double r = 0.0;
  double t_lo = 0.0, t_hi = 0.0;
  double slope = 0.0;          // log-log fit over the final dyadic window
  bool monotone_decreasing = false;
  std::vector<double> times;
  std::vector<double> norms;
};
DecayReport decay_scan(const Trajectory& traj, double r);

// Mixed space-time norm ||u; L^q([t1,t2], L^r)|| over stored snapshots,
// trapezoidal in time; q = infinity takes the max.
double spacetime_norm(const Trajectory& traj, double q, double r, double t1, double t2);

}  // namespace hs
