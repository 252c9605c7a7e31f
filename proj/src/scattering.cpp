#include "hs/scattering.hpp"

#include "hs/fft.hpp"
#include "hs/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hs {
namespace {

double h1_distance(const Field& a, const Field& b) {
  require_same_grid(a, b);
  Field diff = a;
  for (std::size_t i = 0; i < diff.values.size(); ++i) diff.values[i] -= b.values[i];
  return h1_norm(diff);
}

}  // namespace

Field interaction_picture(const Field& u) {
  Field out = free_propagate(u, -u.time);
  out.time = u.time;
  return out;
}

ScatterResult extract_asymptotic(const Trajectory& traj, const PotentialOnGrid& pot,
                                 const std::vector<double>& checkpoints, double converge_tol) {
  if (checkpoints.size() < 3)
    throw std::invalid_argument("extract_asymptotic: needs at least 3 checkpoints");
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end()) ||
      std::adjacent_find(checkpoints.begin(), checkpoints.end()) != checkpoints.end())
    throw std::invalid_argument("extract_asymptotic: checkpoints must be strictly increasing");

  ScatterResult res;
  res.checkpoint_times = checkpoints;

  Field prev;
  bool have_prev = false;
  for (double t : checkpoints) {
    const Field& snap = traj.snapshot_at(t);
    Field tilde = interaction_picture(snap);
    res.hartree_tail.push_back(hartree_term(snap, pot));
    if (have_prev)
      res.increments.push_back(h1_distance(tilde, prev));
    else
      res.increments.push_back(0.0);
    prev = std::move(tilde);
    have_prev = true;
  }
  res.u_plus = prev;
  res.u_plus.time = 0.0;  // an asymptotic state is a free datum

  const Field& u_start = traj.snapshots.front();
  res.mass_residual = std::abs(std::sqrt(mass(res.u_plus)) - std::sqrt(mass(u_start)));
  res.energy_residual = std::abs(kinetic_energy(res.u_plus) - energy(u_start, pot));

  const double scale = h1_norm(res.u_plus);
  res.converged = scale > 0.0 && res.increments.back() < converge_tol * scale;
  const auto& inc = res.increments;
  res.diverging = inc.size() >= 3 && inc.back() > inc[inc.size() - 2] &&
                  inc[inc.size() - 2] > inc[inc.size() - 3];
  return res;
}

Field wave_operator(const Field& u_plus, const PotentialOnGrid& pot, double T, double dt) {
  require_valid(u_plus);
  if (!(T > 0.0)) throw std::invalid_argument("wave_operator: horizon must be positive");
  Field data = free_propagate(u_plus, T);
  data.time = T;
  Field u0 = evolve_endpoint(data, pot, dt, 0.0);
  u0.time = 0.0;
  return u0;
}

WaveOperatorResult wave_operator_pair(const Field& u_plus, const PotentialOnGrid& pot, double T,
                                      double dt) {
  WaveOperatorResult res;
  res.u0 = wave_operator(u_plus, pot, T, dt);
  res.u0_refined = wave_operator(u_plus, pot, 2.0 * T, dt);
  res.richardson_h1 = h1_distance(res.u0, res.u0_refined);
  return res;
}

RoundTripReport roundtrip_from_state(const Field& u0, const Field& at_T,
                                     const PotentialOnGrid& pot, double T, double dt,
                                     Field* u_plus_out, Field* u0_prime_out) {
  RoundTripReport rep;
  rep.T = T;
  rep.u0_h1 = h1_norm(u0);

  if (!pot.is_zero()) {
    const H3Report h3 = check_H3(pot, 2.0, 1.0);
    rep.h3_pass = h3.pass;
  }

  Field u_plus = interaction_picture(at_T);
  u_plus.time = 0.0;
  rep.hartree_at_T = hartree_term(at_T, pot);

  WaveOperatorResult wav = wave_operator_pair(u_plus, pot, T, dt);
  const Field& u0_prime = wav.u0;
  rep.richardson_h1 = wav.richardson_h1;

  rep.relative_h1_error = rep.u0_h1 > 0.0 ? h1_distance(u0_prime, u0) / rep.u0_h1 : 0.0;
  rep.mass_residual = std::abs(std::sqrt(mass(u0_prime)) - std::sqrt(mass(u0)));
  rep.energy_residual = std::abs(energy(u0_prime, pot) - kinetic_energy(u_plus));

  if (u_plus_out) *u_plus_out = std::move(u_plus);
  if (u0_prime_out) *u0_prime_out = wav.u0;
  return rep;
}

RoundTripReport completeness_roundtrip(const Field& u0, const PotentialOnGrid& pot, double T,
                                       double dt, Field* u_plus_out, Field* u0_prime_out) {
  require_valid(u0);
  if (!(T > 0.0)) throw std::invalid_argument("completeness_roundtrip: horizon must be positive");
  Field at_T = evolve_endpoint(u0, pot, dt, T);
  return roundtrip_from_state(u0, at_T, pot, T, dt, u_plus_out, u0_prime_out);
}

}  // namespace hs
