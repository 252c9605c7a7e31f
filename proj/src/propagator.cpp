#include "hs/propagator.hpp"

#include "hs/fft.hpp"
#include "hs/observables.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hs {
namespace {

// Grid-derived arrays shared by every step of an evolution.
struct Workspace {
  GridSpec g;
  DiagnosticsConfig diag;
  double sigma = 0.0;
  double band = 0.0;
  double cube_edge = 0.0;
  bool cube_clamped = false;
  int cubes_per_axis = 0;
  std::size_t n_cubes = 0;
  std::vector<double> k2_full;   // propagator phase uses the full Nyquist value
  std::vector<double> k2_grad;   // gradient convention zeroes the Nyquist mode
  std::vector<double> radius;    // |x|
  std::vector<int> cube_of;
  std::vector<unsigned char> boundary;
  std::vector<double> dil_w[3];  // x_a / sqrt(|x|^2 + sigma^2)

  Workspace(const GridSpec& grid, const DiagnosticsConfig& d) : g(grid), diag(d) {
    const int N = g.points_per_axis;
    const double h = g.spacing();
    const double L = g.half_length;
    sigma = d.dilation_sigma < 0.0 ? h : d.dilation_sigma;
    band = d.boundary_band < 0.0 ? 2.0 * h : d.boundary_band;

    const double edge_wanted = d.split_a / std::sqrt(2.0 * g.dim);
    int k_edge = static_cast<int>(std::floor(edge_wanted / h + 1e-12));
    cube_clamped = k_edge < 1 || std::abs(k_edge * h - edge_wanted) > 1e-12 * edge_wanted;
    k_edge = std::max(1, k_edge);
    cube_edge = k_edge * h;
    cubes_per_axis = (N + k_edge - 1) / k_edge;
    n_cubes = 1;
    for (int a = 0; a < g.dim; ++a) n_cubes *= static_cast<std::size_t>(cubes_per_axis);

    const std::size_t total = g.total_points();
    k2_full.resize(total);
    k2_grad.resize(total);
    radius.resize(total);
    cube_of.resize(total);
    boundary.resize(total);
    for (int a = 0; a < g.dim; ++a) dil_w[a].resize(total);

    int ix[3];
    for (std::size_t i = 0; i < total; ++i) {
      g.decode(i, ix);
      double kf = 0.0, kg = 0.0, r2 = 0.0, max_ax = 0.0;
      int cube = 0;
      for (int a = 0; a < g.dim; ++a) {
        const double k = g.wavenumber(ix[a]);
        kf += k * k;
        if (!g.is_nyquist(ix[a])) kg += k * k;
        const double x = g.coordinate(ix[a]);
        r2 += x * x;
        max_ax = std::max(max_ax, std::abs(x));
        cube = cube * cubes_per_axis + ix[a] / k_edge;
      }
      k2_full[i] = kf;
      k2_grad[i] = kg;
      radius[i] = std::sqrt(r2);
      cube_of[i] = cube;
      boundary[i] = max_ax >= L - band ? 1 : 0;
      const double hr = std::sqrt(r2 + sigma * sigma);
      for (int a = 0; a < g.dim; ++a)
        dil_w[a][i] = hr > 0.0 ? g.coordinate(ix[a]) / hr : 0.0;
    }
  }

};

std::vector<cplx> half_kick(const Workspace& ws, double dt_signed) {
  std::vector<cplx> mult(ws.k2_full.size());
  for (std::size_t i = 0; i < mult.size(); ++i) {
    const double phase = -0.25 * dt_signed * ws.k2_full[i];
    mult[i] = cplx{std::cos(phase), std::sin(phase)};
  }
  return mult;
}

struct StepBuffers {
  std::vector<cplx> u_phys;
  std::vector<cplx> work;   // rho / convolution / gradient scratch
  std::vector<cplx> work2;  // rho_hat for diagnostics
};

// One Strang step in place on u_hat; leaves the physical state of the new
// time level in buf.u_phys.
void strang_step(const Workspace& ws, const PotentialOnGrid& pot,
                 const std::vector<cplx>& kick, double dt_signed, std::vector<cplx>& u_hat,
                 StepBuffers& buf) {
  const GridSpec& g = ws.g;
  const std::size_t total = g.total_points();

  for (std::size_t i = 0; i < total; ++i) u_hat[i] *= kick[i];

  buf.u_phys = u_hat;
  fft::inverse(g, buf.u_phys.data());

  buf.work.resize(total);
  for (std::size_t i = 0; i < total; ++i) buf.work[i] = cplx{std::norm(buf.u_phys[i]), 0.0};
  fft::forward(g, buf.work.data());
  for (std::size_t i = 0; i < total; ++i) buf.work[i] *= pot.multiplier[i];
  fft::inverse(g, buf.work.data());

  for (std::size_t i = 0; i < total; ++i) {
    const double phase = -dt_signed * buf.work[i].real();
    buf.u_phys[i] *= cplx{std::cos(phase), std::sin(phase)};
  }

  u_hat = buf.u_phys;
  fft::forward(g, u_hat.data());
  for (std::size_t i = 0; i < total; ++i) u_hat[i] *= kick[i];

  // Physical state at the new time level for diagnostics / the next kick.
  buf.u_phys = u_hat;
  fft::inverse(g, buf.u_phys.data());
}

DiagnosticsRow compute_row(const Workspace& ws, const PotentialOnGrid& pot,
                           const std::vector<cplx>& u_hat, const std::vector<cplx>& u_phys,
                           double t, StepBuffers& buf, double* boundary_fraction) {
  const GridSpec& g = ws.g;
  const std::size_t total = g.total_points();
  const double hn = g.cell_volume();
  const double w = hn / static_cast<double>(total);

  DiagnosticsRow row;
  row.t = t;

  double m = 0.0, kin = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    const double a2 = std::norm(u_hat[i]);
    m += a2;
    kin += ws.k2_grad[i] * a2;
  }
  row.mass = w * m;
  row.kinetic = 0.5 * w * kin;

  buf.work2.resize(total);
  for (std::size_t i = 0; i < total; ++i) buf.work2[i] = cplx{std::norm(u_phys[i]), 0.0};
  fft::forward(g, buf.work2.data());
  double hart = 0.0;
  for (std::size_t i = 0; i < total; ++i)
    hart += pot.multiplier[i].real() * std::norm(buf.work2[i]);
  row.hartree = 0.5 * w * hart;
  row.energy = row.kinetic + row.hartree;

  // Dilation: one gradient component at a time.
  double dil = 0.0;
  int ix[3];
  for (int axis = 0; axis < g.dim; ++axis) {
    buf.work.resize(total);
    for (std::size_t i = 0; i < total; ++i) {
      g.decode(i, ix);
      const int j = ix[axis];
      const double k = g.is_nyquist(j) ? 0.0 : g.wavenumber(j);
      buf.work[i] = cplx{0.0, k} * u_hat[i];
    }
    fft::inverse(g, buf.work.data());
    const auto& weight = ws.dil_w[axis];
    for (std::size_t i = 0; i < total; ++i)
      dil += weight[i] * std::imag(std::conj(u_phys[i]) * buf.work[i]);
  }
  row.dilation = hn * dil;

  double s4 = 0.0, s6 = 0.0, internal = 0.0, external = 0.0, bdry = 0.0;
  const double R = split_radius(g, t);
  std::vector<double> cube_acc(ws.n_cubes, 0.0);
  for (std::size_t i = 0; i < total; ++i) {
    const double a2 = std::norm(u_phys[i]);
    s4 += a2 * a2;
    s6 += a2 * a2 * a2;
    if (ws.radius[i] < R) {
      internal += a2;
      cube_acc[ws.cube_of[i]] += a2;
    } else {
      external += a2;
    }
    if (ws.boundary[i]) bdry += a2;
  }
  row.l4 = std::pow(hn * s4, 0.25);
  row.l6 = std::pow(hn * s6, 1.0 / 6.0);
  row.internal_mass = hn * internal;
  row.external_mass = hn * external;

  const double m_exp = ws.diag.split_alpha + 4.0;
  double agg = 0.0;
  for (double c : cube_acc) agg += std::pow(std::sqrt(hn * c), m_exp);
  row.internal_cube = std::pow(agg, 1.0 / m_exp);

  if (boundary_fraction)
    *boundary_fraction = row.mass > 0.0 ? hn * bdry / row.mass : 0.0;
  return row;
}

long long step_count(double span, double dt) {
  return static_cast<long long>(std::ceil(span / dt - 1e-9));
}

}  // namespace

const Field& Trajectory::snapshot_at(double t) const {
  const Field* best = nullptr;
  double best_err = 0.0;
  for (const Field& f : snapshots) {
    const double err = std::abs(f.time - t);
    if (!best || err < best_err) {
      best = &f;
      best_err = err;
    }
  }
  if (!best || best_err > 0.5 * dt + 1e-12)
    throw std::invalid_argument("trajectory holds no snapshot near the requested time");
  return *best;
}

Field free_propagate(const Field& f, double t) {
  require_valid(f);
  Field out = f;
  if (t == 0.0) return out;
  std::vector<cplx> hat = fft::forward_copy(f.grid, f.values);
  const std::size_t total = f.grid.total_points();
  int ix[3];
  for (std::size_t i = 0; i < total; ++i) {
    f.grid.decode(i, ix);
    double k2 = 0.0;
    for (int a = 0; a < f.grid.dim; ++a) {
      const double k = f.grid.wavenumber(ix[a]);
      k2 += k * k;
    }
    const double phase = -0.5 * t * k2;
    hat[i] *= cplx{std::cos(phase), std::sin(phase)};
  }
  fft::inverse(f.grid, hat.data());
  out.values = std::move(hat);
  out.time = f.time + t;
  return out;
}

Field nonlinear_phase_step(const Field& f, const PotentialOnGrid& pot, double dt) {
  require_valid(f);
  if (!(f.grid == pot.grid))
    throw std::invalid_argument("nonlinear_phase_step: grid mismatch");
  Field rho;
  rho.grid = f.grid;
  rho.time = f.time;
  rho.values.resize(f.values.size());
  for (std::size_t i = 0; i < f.values.size(); ++i)
    rho.values[i] = cplx{std::norm(f.values[i]), 0.0};
  Field w = convolve_density(pot, rho, /*warn_signed=*/false);
  Field out = f;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    const double phase = -dt * w.values[i].real();
    out.values[i] *= cplx{std::cos(phase), std::sin(phase)};
  }
  return out;
}

Trajectory strang_evolve(const Field& u0, const PotentialOnGrid& pot, const EvolveConfig& cfg) {
  require_valid(u0);
  if (!(u0.grid == pot.grid)) throw std::invalid_argument("strang_evolve: grid mismatch");
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("strang_evolve: dt must be positive");
  if (cfg.sample_stride < 1) throw std::invalid_argument("strang_evolve: stride must be >= 1");

  const Workspace ws(u0.grid, cfg.diag);
  const GridSpec& g = u0.grid;
  const double span = std::abs(cfg.t_end - cfg.t_start);
  const double sgn = cfg.t_end >= cfg.t_start ? 1.0 : -1.0;
  const long long steps = step_count(span, cfg.dt);

  Trajectory traj;
  traj.grid = g;
  traj.diag = cfg.diag;
  traj.dt = cfg.dt;
  traj.cube_edge = ws.cube_edge;
  traj.cube_edge_clamped = ws.cube_clamped;

  std::vector<cplx> u_hat = fft::forward_copy(g, u0.values);
  StepBuffers buf;
  buf.u_phys = u0.values;

  double t = cfg.t_start;
  double bfrac = 0.0;
  traj.rows.push_back(compute_row(ws, pot, u_hat, buf.u_phys, t, buf, &bfrac));
  traj.boundary_mass_max = bfrac;
  if (bfrac > cfg.diag.boundary_tol) traj.boundary_first_exceed = t;
  traj.snapshots.push_back(Field{g, u0.values, t});

  std::vector<cplx> kick = half_kick(ws, sgn * cfg.dt);
  for (long long s = 0; s < steps; ++s) {
    double dt_k = cfg.dt;
    if (s == steps - 1) dt_k = span - cfg.dt * static_cast<double>(steps - 1);
    const bool regular = std::abs(dt_k - cfg.dt) < 1e-12 * cfg.dt;
    std::vector<cplx> odd_kick;
    if (!regular) odd_kick = half_kick(ws, sgn * dt_k);
    strang_step(ws, pot, regular ? kick : odd_kick, sgn * dt_k, u_hat, buf);
    t = (s == steps - 1) ? cfg.t_end : cfg.t_start + sgn * cfg.dt * static_cast<double>(s + 1);

    traj.rows.push_back(compute_row(ws, pot, u_hat, buf.u_phys, t, buf, &bfrac));
    const DiagnosticsRow& row = traj.rows.back();
    if (!std::isfinite(row.mass) || !std::isfinite(row.energy)) {
      std::ostringstream os;
      os << "strang_evolve: state became non-finite at t = " << t << " (step " << s + 1 << ")";
      throw std::runtime_error(os.str());
    }
    traj.boundary_mass_max = std::max(traj.boundary_mass_max, bfrac);
    if (bfrac > cfg.diag.boundary_tol && traj.boundary_first_exceed < 0.0)
      traj.boundary_first_exceed = t;

    if ((s + 1) % cfg.sample_stride == 0 || s == steps - 1)
      traj.snapshots.push_back(Field{g, buf.u_phys, t});
  }
  return traj;
}

Field evolve_endpoint(const Field& u0, const PotentialOnGrid& pot, double dt, double t_target,
                      EndpointMonitor* monitor) {
  require_valid(u0);
  if (!(u0.grid == pot.grid)) throw std::invalid_argument("evolve_endpoint: grid mismatch");
  if (!(dt > 0.0)) throw std::invalid_argument("evolve_endpoint: dt must be positive");

  const GridSpec& g = u0.grid;
  DiagnosticsConfig light;
  const Workspace ws(g, light);
  const double span = std::abs(t_target - u0.time);
  const double sgn = t_target >= u0.time ? 1.0 : -1.0;
  const long long steps = step_count(span, dt);

  std::vector<cplx> u_hat = fft::forward_copy(g, u0.values);
  StepBuffers buf;
  buf.u_phys = u0.values;
  const double total_d = static_cast<double>(g.total_points());
  const double w = g.cell_volume() / total_d;

  double mass0 = 0.0;
  for (const cplx& c : u_hat) mass0 += std::norm(c);
  mass0 *= w;

  EndpointMonitor mon;
  std::vector<cplx> kick = half_kick(ws, sgn * dt);
  for (long long s = 0; s < steps; ++s) {
    double dt_k = dt;
    if (s == steps - 1) dt_k = span - dt * static_cast<double>(steps - 1);
    const bool regular = std::abs(dt_k - dt) < 1e-12 * dt;
    std::vector<cplx> odd_kick;
    if (!regular) odd_kick = half_kick(ws, sgn * dt_k);
    strang_step(ws, pot, regular ? kick : odd_kick, sgn * dt_k, u_hat, buf);

    double m = 0.0, kin = 0.0;
    for (std::size_t i = 0; i < u_hat.size(); ++i) {
      const double a2 = std::norm(u_hat[i]);
      m += a2;
      kin += ws.k2_grad[i] * a2;
    }
    m *= w;
    kin *= 0.5 * w;
    if (!std::isfinite(m) || !std::isfinite(kin)) {
      std::ostringstream os;
      os << "evolve_endpoint: state became non-finite at step " << s + 1;
      throw std::runtime_error(os.str());
    }
    mon.mass_drift_max = std::max(mon.mass_drift_max, std::abs(m - mass0) / std::max(mass0, 1e-300));
    mon.kinetic_max = std::max(mon.kinetic_max, kin);
  }
  mon.steps = steps;
  if (monitor) *monitor = mon;

  Field out;
  out.grid = g;
  out.time = t_target;
  out.values = std::move(buf.u_phys);
  if (steps == 0) out.values = u0.values;
  return out;
}

PicardResult picard_iterate(const Field& u0, const PotentialOnGrid& pot, double t_final,
                            int n_iter, double dt_quad) {
  require_valid(u0);
  if (!(u0.grid == pot.grid)) throw std::invalid_argument("picard_iterate: grid mismatch");
  if (n_iter < 1) throw std::invalid_argument("picard_iterate: needs n_iter >= 1");
  if (!(t_final > 0.0) || !(dt_quad > 0.0))
    throw std::invalid_argument("picard_iterate: needs positive interval and quadrature step");

  const GridSpec& g = u0.grid;
  const std::size_t total = g.total_points();
  const int M = std::max(1, static_cast<int>(std::lround(t_final / dt_quad)));
  const double dt = t_final / M;

  // Free-flow phases for one quadrature step.
  std::vector<cplx> step_phase(total);
  {
    int ix[3];
    for (std::size_t i = 0; i < total; ++i) {
      g.decode(i, ix);
      double k2 = 0.0;
      for (int a = 0; a < g.dim; ++a) {
        const double k = g.wavenumber(ix[a]);
        k2 += k * k;
      }
      const double phase = -0.5 * dt * k2;
      step_phase[i] = cplx{std::cos(phase), std::sin(phase)};
    }
  }

  const std::vector<cplx> u0_hat = fft::forward_copy(g, u0.values);

  // Free flow at the quadrature nodes (iterate zero).
  std::vector<std::vector<cplx>> free_hat(M + 1);
  free_hat[0] = u0_hat;
  for (int m = 1; m <= M; ++m) {
    free_hat[m] = free_hat[m - 1];
    for (std::size_t i = 0; i < total; ++i) free_hat[m][i] *= step_phase[i];
  }

  std::vector<std::vector<cplx>> cur(M + 1);
  for (int m = 0; m <= M; ++m) {
    cur[m] = free_hat[m];
    fft::inverse(g, cur[m].data());
  }

  const double hn = g.cell_volume();
  PicardResult result;
  std::vector<cplx> f_hat_prev(total), g_hat(total), work(total);

  for (int iter = 0; iter < n_iter; ++iter) {
    std::vector<std::vector<cplx>> next(M + 1);
    next[0] = cur[0];
    std::fill(g_hat.begin(), g_hat.end(), cplx{0.0, 0.0});

    // f at node 0.
    auto eval_f_hat = [&](const std::vector<cplx>& u, std::vector<cplx>& out) {
      out.resize(total);
      for (std::size_t i = 0; i < total; ++i) out[i] = cplx{std::norm(u[i]), 0.0};
      fft::forward(g, out.data());
      for (std::size_t i = 0; i < total; ++i) out[i] *= pot.multiplier[i];
      fft::inverse(g, out.data());
      for (std::size_t i = 0; i < total; ++i) out[i] = u[i] * out[i].real();
      fft::forward(g, out.data());
    };
    eval_f_hat(cur[0], f_hat_prev);

    double delta = 0.0;
    for (int m = 1; m <= M; ++m) {
      eval_f_hat(cur[m], work);
      for (std::size_t i = 0; i < total; ++i)
        g_hat[i] = step_phase[i] * (g_hat[i] + 0.5 * dt * f_hat_prev[i]) + 0.5 * dt * work[i];
      std::swap(f_hat_prev, work);

      next[m].resize(total);
      for (std::size_t i = 0; i < total; ++i)
        next[m][i] = free_hat[m][i] - cplx{0.0, 1.0} * g_hat[i];
      fft::inverse(g, next[m].data());

      double d2 = 0.0;
      for (std::size_t i = 0; i < total; ++i) d2 += std::norm(next[m][i] - cur[m][i]);
      delta = std::max(delta, std::sqrt(hn * d2));
    }
    result.iterate_deltas.push_back(delta);
    cur = std::move(next);
    if (!std::isfinite(delta)) break;
  }

  const auto& d = result.iterate_deltas;
  result.diverged = d.empty() || !std::isfinite(d.back()) ||
                    (d.size() >= 2 && d.back() > d[d.size() - 2]);

  result.final_state.grid = g;
  result.final_state.time = u0.time + t_final;
  result.final_state.values = std::move(cur[M]);
  return result;
}

}  // namespace hs
