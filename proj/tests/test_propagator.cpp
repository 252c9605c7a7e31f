#include <doctest.h>

#include "hs/exponents.hpp"
#include "hs/fft.hpp"
#include "hs/norms.hpp"
#include "hs/propagator.hpp"

#include "oracles.hpp"

#include <cmath>

using namespace hs;

namespace {

Field gaussian_state(const GridSpec& g, double amplitude, double width) {
  oracle::GaussianPacket p;
  p.amplitude = amplitude;
  p.width = width;
  return oracle::free_gaussian_field(p, g, 0.0);
}

double l2_distance(const Field& a, const Field& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) sum += std::norm(a.values[i] - b.values[i]);
  return std::sqrt(a.grid.cell_volume() * sum);
}

double h1_distance(const Field& a, const Field& b) {
  Field d = a;
  for (std::size_t i = 0; i < d.values.size(); ++i) d.values[i] -= b.values[i];
  return h1_norm(d);
}

}  // namespace

TEST_CASE("free propagator: identity, closed form, group law, unitarity") {
  const GridSpec g = make_grid(3, 32, 8.0);
  oracle::GaussianPacket p;
  p.amplitude = 1.0;
  p.width = 1.0;
  const Field u0 = oracle::free_gaussian_field(p, g, 0.0);

  SUBCASE("t = 0 is the identity") {
    const Field v = free_propagate(u0, 0.0);
    CHECK(oracle::sup_relative_error(v, u0) == 0.0);
  }

  SUBCASE("matches the spreading-Gaussian closed form") {
    for (double t : {0.5, 1.0, 2.0}) {
      const Field num = free_propagate(u0, t);
      const Field ref = oracle::free_gaussian_field(p, g, t);
      CHECK(oracle::sup_relative_error(num, ref) < 1e-7);
    }
  }

  SUBCASE("group law U(s)U(t) = U(s+t)") {
    const Field two_hops = free_propagate(free_propagate(u0, 0.7), 0.9);
    const Field direct = free_propagate(u0, 1.6);
    CHECK(l2_distance(two_hops, direct) < 1e-12 * std::sqrt(mass(u0)));
  }

  SUBCASE("exactly unitary in L2") {
    const double m0 = mass(u0);
    for (double t : {0.3, 2.0, 11.0})
      CHECK(mass(free_propagate(u0, t)) == doctest::Approx(m0).epsilon(1e-13));
  }

  SUBCASE("dispersive bound with conjugate-exponent data norm") {
    // ||U(t)u0||_r (2 pi t)^{delta(r)} <= ||u0||_{conj(r)} (1 + 5%).
    for (double r : {4.0, 6.0}) {
      const double rhs = lp_norm(u0, conjugate_exponent(r)) * 1.05;
      for (double t : {1.0, 2.0, 3.0}) {
        const Field ut = free_propagate(u0, t);
        const double lhs = lp_norm(ut, r) * std::pow(2.0 * M_PI * t, delta_exponent(3, r));
        CHECK(lhs <= rhs);
      }
    }
  }
}

TEST_CASE("nonlinear phase kick") {
  const GridSpec g = make_grid(3, 16, 4.0);
  const Field u0 = gaussian_state(g, 1.3, 1.0);

  SUBCASE("zero potential leaves the state alone") {
    const PotentialOnGrid z = sample_potential(PotentialSpec::zero_potential(), g);
    const Field v = nonlinear_phase_step(u0, z, 0.37);
    CHECK(oracle::sup_relative_error(v, u0) < 1e-15);
  }

  SUBCASE("pointwise modulus is preserved") {
    const PotentialOnGrid pot = sample_potential(PotentialSpec::inverse_power(1.0, 2.5), g);
    const Field v = nonlinear_phase_step(u0, pot, 0.1);
    double err = 0.0;
    for (std::size_t i = 0; i < v.values.size(); ++i)
      err = std::max(err, std::abs(std::abs(v.values[i]) - std::abs(u0.values[i])));
    CHECK(err < 1e-13);
  }

  SUBCASE("constant field under the identity kernel gets phase -dt |c|^2") {
    PotentialOnGrid pot = sample_potential(PotentialSpec::zero_potential(), g);
    std::vector<cplx> disp(g.total_points(), cplx{0.0, 0.0});
    disp[0] = cplx{1.0 / g.cell_volume(), 0.0};
    fft::forward(g, disp.data());
    for (cplx& c : disp) c *= g.cell_volume();
    pot.multiplier = disp;

    Field c = Field::zero(g);
    for (cplx& v : c.values) v = cplx{0.6, 0.3};
    const double dt = 0.21;
    const Field v = nonlinear_phase_step(c, pot, dt);
    const cplx expected = cplx{0.6, 0.3} * std::polar(1.0, -dt * std::norm(cplx{0.6, 0.3}));
    double err = 0.0;
    for (const cplx& w : v.values) err = std::max(err, std::abs(w - expected));
    CHECK(err < 1e-13);
  }
}

TEST_CASE("strang evolution") {
  const GridSpec g = make_grid(3, 24, 6.0);
  const PotentialOnGrid zero_pot = sample_potential(PotentialSpec::zero_potential(), g);
  const PotentialOnGrid pot = sample_potential(PotentialSpec::inverse_power(1.0, 2.5), g);
  const Field u0 = gaussian_state(g, 1.0, 1.0);

  SUBCASE("V = 0 reproduces the free propagator at sampled times") {
    EvolveConfig cfg;
    cfg.dt = 0.05;
    cfg.t_end = 1.0;
    cfg.sample_stride = 5;
    const Trajectory traj = strang_evolve(u0, zero_pot, cfg);
    for (const Field& snap : traj.snapshots) {
      const Field ref = free_propagate(u0, snap.time);
      CHECK(l2_distance(snap, ref) < 1e-10 * std::sqrt(mass(u0)));
    }
  }

  SUBCASE("mass is conserved to rounding at every step") {
    EvolveConfig cfg;
    cfg.dt = 0.02;
    cfg.t_end = 0.6;
    const Trajectory traj = strang_evolve(u0, pot, cfg);
    const double m0 = traj.rows.front().mass;
    for (const DiagnosticsRow& row : traj.rows)
      CHECK(std::abs(row.mass - m0) / m0 < 1e-11);
  }

  SUBCASE("second order: dt halving improves the endpoint by about 4x") {
    EvolveConfig ref_cfg;
    ref_cfg.dt = 0.0025;
    ref_cfg.t_end = 1.0;
    ref_cfg.sample_stride = 400;
    const Field ref = strang_evolve(u0, pot, ref_cfg).final();

    auto end_err = [&](double dt) {
      EvolveConfig cfg;
      cfg.dt = dt;
      cfg.t_end = 1.0;
      cfg.sample_stride = 1 << 20;
      return h1_distance(strang_evolve(u0, pot, cfg).final(), ref);
    };
    const double e_coarse = end_err(0.04);
    const double e_fine = end_err(0.02);
    const double factor = e_coarse / e_fine;
    CHECK(factor > 3.5);
    CHECK(factor < 4.5);
  }

  SUBCASE("time reversibility") {
    EvolveConfig fwd;
    fwd.dt = 0.02;
    fwd.t_end = 1.0;
    fwd.sample_stride = 1 << 20;
    const Field at1 = strang_evolve(u0, pot, fwd).final();
    EvolveConfig bwd;
    bwd.dt = 0.02;
    bwd.t_start = 1.0;
    bwd.t_end = 0.0;
    bwd.sample_stride = 1 << 20;
    const Field back = strang_evolve(at1, pot, bwd).final();
    CHECK(l2_distance(back, u0) < 1e-9 * std::sqrt(mass(u0)));
  }

  SUBCASE("global phase equivariance") {
    const double theta = 0.77;
    Field rotated = u0;
    for (cplx& v : rotated.values) v *= std::polar(1.0, theta);
    EvolveConfig cfg;
    cfg.dt = 0.05;
    cfg.t_end = 0.5;
    cfg.sample_stride = 1 << 20;
    Field a = strang_evolve(rotated, pot, cfg).final();
    Field b = strang_evolve(u0, pot, cfg).final();
    for (cplx& v : b.values) v *= std::polar(1.0, theta);
    CHECK(l2_distance(a, b) < 1e-12 * std::sqrt(mass(u0)));
  }

  SUBCASE("endpoint-only evolution matches the full trajectory") {
    EvolveConfig cfg;
    cfg.dt = 0.02;
    cfg.t_end = 0.8;
    cfg.sample_stride = 1 << 20;
    const Field full = strang_evolve(u0, pot, cfg).final();
    EndpointMonitor mon;
    const Field light = evolve_endpoint(u0, pot, 0.02, 0.8, &mon);
    CHECK(l2_distance(full, light) == 0.0);
    CHECK(mon.steps == 40);
    CHECK(mon.mass_drift_max < 1e-11);
  }

  SUBCASE("snapshot times are strictly monotone and stride-spaced") {
    EvolveConfig cfg;
    cfg.dt = 0.1;
    cfg.t_end = 1.0;
    cfg.sample_stride = 3;
    const Trajectory traj = strang_evolve(u0, zero_pot, cfg);
    for (std::size_t i = 0; i + 1 < traj.snapshots.size(); ++i)
      CHECK(traj.snapshots[i + 1].time > traj.snapshots[i].time);
    CHECK(traj.snapshots.front().time == 0.0);
    CHECK(traj.snapshots.back().time == doctest::Approx(1.0));
    CHECK(traj.rows.size() == 11);
  }
}

TEST_CASE("picard iteration") {
  const GridSpec g = make_grid(3, 24, 6.0);
  const PotentialOnGrid zero_pot = sample_potential(PotentialSpec::zero_potential(), g);
  const PotentialOnGrid pot = sample_potential(PotentialSpec::inverse_power(1.0, 2.5), g);

  SUBCASE("V = 0: the free flow is a fixed point after one iteration") {
    const Field u0 = gaussian_state(g, 0.8, 1.0);
    const PicardResult res = picard_iterate(u0, zero_pot, 0.5, 1, 0.05);
    const Field ref = free_propagate(u0, 0.5);
    CHECK(l2_distance(res.final_state, ref) < 1e-12);
    CHECK(res.iterate_deltas.back() < 1e-12);
    CHECK_FALSE(res.diverged);
  }

  SUBCASE("small data: agrees with the splitting integrator") {
    const Field u0 = gaussian_state(g, 0.25, 1.0);
    const PicardResult res = picard_iterate(u0, pot, 0.1, 6, 0.0025);
    CHECK_FALSE(res.diverged);
    EvolveConfig cfg;
    cfg.dt = 0.002;
    cfg.t_end = 0.1;
    cfg.sample_stride = 1 << 20;
    const Field ref = strang_evolve(u0, pot, cfg).final();
    CHECK(l2_distance(res.final_state, ref) < 1e-5);
  }

  SUBCASE("large data on a long interval is flagged") {
    const Field u0 = gaussian_state(g, 12.0, 1.0);
    const PicardResult res = picard_iterate(u0, pot, 2.0, 6, 0.1);
    CHECK(res.diverged);
  }
}
