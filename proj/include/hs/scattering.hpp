// Wave operators and asymptotic-state extraction: interaction-picture
// transforms, backward construction of the forward wave operator, and the
// round-trip completeness experiment.
#pragma once

#include "hs/observables.hpp"

#include <vector>

namespace hs {

// u(t) -> U(-t) u(t); freezes the free dynamics. The time stamp is kept.
Field interaction_picture(const Field& u);

struct ScatterResult {
  Field u_plus;
  std::vector<double> checkpoint_times;
  // H^1 Cauchy increments ||utilde(t_k) - utilde(t_{k-1})|| (first entry 0).
  std::vector<double> increments;
  std::vector<double> hartree_tail;  // interaction energy at the checkpoints
  double mass_residual = 0.0;        // | ||u_plus||_2 - ||u(0)||_2 |
  double energy_residual = 0.0;      // | (1/2)||grad u_plus||^2 - E(u0) |
  bool converged = false;            // final relative increment below tol
  bool diverging = false;            // increments grew at the tail
};

// Pulls the interaction-picture field at increasing checkpoints out of a
// trajectory and reports its H^1 Cauchy behaviour together with the
// conservation transfer to the candidate asymptotic state.
ScatterResult extract_asymptotic(const Trajectory& traj, const PotentialOnGrid& pot,
                                 const std::vector<double>& checkpoints,
                                 double converge_tol = 1e-4);

// Finite-horizon realization of the forward wave operator: place U(T) u_plus
// at time T and integrate the interacting equation back to t = 0.
Field wave_operator(const Field& u_plus, const PotentialOnGrid& pot, double T, double dt);

struct WaveOperatorResult {
  Field u0;            // horizon-T reconstruction
  Field u0_refined;    // horizon-2T reconstruction
  double richardson_h1 = 0.0;  // H^1 distance between the two
};
// Runs the (T, 2T) pair; the discrepancy estimates the horizon truncation.
WaveOperatorResult wave_operator_pair(const Field& u_plus, const PotentialOnGrid& pot, double T,
                                      double dt);

struct RoundTripReport {
  double T = 0.0;
  double relative_h1_error = 0.0;  // ||u0' - u0||_H1 / ||u0||_H1
  double richardson_h1 = 0.0;      // (T, 2T) reconstruction discrepancy
  double mass_residual = 0.0;
  double energy_residual = 0.0;    // |E(u0') - (1/2)||grad u_plus||^2|
  double hartree_at_T = 0.0;
  double u0_h1 = 0.0;
  bool h3_pass = true;             // repulsivity precondition of the theory
};

// Forward evolve to T, extract u_plus = utilde(T), reconstruct through the
// wave operator and compare with the initial data in H^1.
RoundTripReport completeness_roundtrip(const Field& u0, const PotentialOnGrid& pot, double T,
                                       double dt, Field* u_plus_out = nullptr,
                                       Field* u0_prime_out = nullptr);

// Same comparison when the forward state at time T is already available.
RoundTripReport roundtrip_from_state(const Field& u0, const Field& at_T,
                                     const PotentialOnGrid& pot, double T, double dt,
                                     Field* u_plus_out = nullptr, Field* u0_prime_out = nullptr);

}  // namespace hs
