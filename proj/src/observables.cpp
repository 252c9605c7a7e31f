#include "hs/observables.hpp"

#include "hs/exponents.hpp"
#include "hs/fft.hpp"
#include "hs/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace hs {
namespace {

std::vector<cplx> density(const Field& u) {
  std::vector<cplx> rho(u.values.size());
  for (std::size_t i = 0; i < u.values.size(); ++i)
    rho[i] = cplx{std::norm(u.values[i]), 0.0};
  return rho;
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& y) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i)
    sum += 0.5 * (y[i] + y[i + 1]) * (t[i + 1] - t[i]);
  return sum;
}

}  // namespace

double kinetic_energy(const Field& u) {
  const double gn = gradient_l2_norm(u);
  return 0.5 * gn * gn;
}

double hartree_term(const Field& u, const PotentialOnGrid& pot) {
  require_valid(u);
  if (!(u.grid == pot.grid)) throw std::invalid_argument("hartree_term: grid mismatch");
  Field rho;
  rho.grid = u.grid;
  rho.time = u.time;
  rho.values = density(u);
  Field w = convolve_density(pot, rho, /*warn_signed=*/false);
  double sum = 0.0;
  for (std::size_t i = 0; i < rho.values.size(); ++i)
    sum += rho.values[i].real() * w.values[i].real();
  return 0.5 * u.grid.cell_volume() * sum;
}

double energy(const Field& u, const PotentialOnGrid& pot) {
  return kinetic_energy(u) + hartree_term(u, pot);
}

double dilation_quantity(const Field& u, double sigma) {
  require_valid(u);
  if (sigma < 0.0) throw std::invalid_argument("dilation_quantity: sigma must be >= 0");
  const GridSpec& g = u.grid;
  const std::size_t total = g.total_points();
  std::vector<cplx> hat = fft::forward_copy(g, u.values);

  double dil = 0.0;
  int ix[3];
  std::vector<cplx> work(total);
  for (int axis = 0; axis < g.dim; ++axis) {
    for (std::size_t i = 0; i < total; ++i) {
      g.decode(i, ix);
      const int j = ix[axis];
      const double k = g.is_nyquist(j) ? 0.0 : g.wavenumber(j);
      work[i] = cplx{0.0, k} * hat[i];
    }
    fft::inverse(g, work.data());
    for (std::size_t i = 0; i < total; ++i) {
      g.decode(i, ix);
      double r2 = 0.0;
      for (int a = 0; a < g.dim; ++a) {
        const double x = g.coordinate(ix[a]);
        r2 += x * x;
      }
      const double hr = std::sqrt(r2 + sigma * sigma);
      const double w = hr > 0.0 ? g.coordinate(ix[axis]) / hr : 0.0;
      dil += w * std::imag(std::conj(u.values[i]) * work[i]);
    }
  }
  return g.cell_volume() * dil;
}

MorawetzKernel make_morawetz_kernel(const PotentialOnGrid& pot) {
  const GridSpec& g = pot.grid;
  const int N = g.points_per_axis;
  const double h = g.spacing();
  const std::size_t total = g.total_points();

  MorawetzKernel kernel;
  kernel.grid = g;
  kernel.mult.assign(g.dim, std::vector<cplx>(total));

  // v'(r)/r on the displacement lattice, memoized on the integer radius.
  std::unordered_map<long long, double> memo;
  auto slope_over_r = [&](long long key2) {
    if (key2 == 0) return 0.0;
    auto it = memo.find(key2);
    if (it != memo.end()) return it->second;
    const double r = h * std::sqrt(static_cast<double>(key2));
    const double val = pot.radial_deriv(r) / r;
    memo.emplace(key2, val);
    return val;
  };

  std::vector<std::vector<cplx>> samples(g.dim, std::vector<cplx>(total));
  int ix[3];
  for (std::size_t i = 0; i < total; ++i) {
    g.decode(i, ix);
    long long key = 0;
    bool nyquist = false;
    double delta[3] = {0.0, 0.0, 0.0};
    for (int a = 0; a < g.dim; ++a) {
      const long long m = g.signed_index(ix[a]);
      key += m * m;
      delta[a] = m * h;
      if (g.is_nyquist(ix[a])) nyquist = true;
    }
    const double s = slope_over_r(key);
    for (int a = 0; a < g.dim; ++a) {
      // The unpaired Nyquist displacement has no odd partner; zero it to keep
      // the kernel odd and the transform purely imaginary.
      const double val = (nyquist || key == 0) ? 0.0 : delta[a] * s;
      samples[a][i] = cplx{val, 0.0};
    }
  }

  const double hn = g.cell_volume();
  for (int a = 0; a < g.dim; ++a) {
    fft::forward(g, samples[a].data());
    for (cplx& c : samples[a]) c *= hn;
    kernel.mult[a] = std::move(samples[a]);
  }
  return kernel;
}

double morawetz_integrand(const Field& u, const MorawetzKernel& kernel) {
  require_valid(u);
  if (!(u.grid == kernel.grid)) throw std::invalid_argument("morawetz_integrand: grid mismatch");
  const GridSpec& g = u.grid;
  const std::size_t total = g.total_points();

  std::vector<cplx> rho_hat = density(u);
  fft::forward(g, rho_hat.data());

  double J = 0.0;
  int ix[3];
  std::vector<cplx> work(total);
  for (int axis = 0; axis < g.dim; ++axis) {
    for (std::size_t i = 0; i < total; ++i) work[i] = kernel.mult[axis][i] * rho_hat[i];
    fft::inverse(g, work.data());
    for (std::size_t i = 0; i < total; ++i) {
      g.decode(i, ix);
      double r2 = 0.0;
      for (int a = 0; a < g.dim; ++a) {
        const double x = g.coordinate(ix[a]);
        r2 += x * x;
      }
      if (r2 == 0.0) continue;
      const double xhat = g.coordinate(ix[axis]) / std::sqrt(r2);
      J -= xhat * std::norm(u.values[i]) * work[i].real();
    }
  }
  return g.cell_volume() * J;
}

double morawetz_integrand(const Field& u, const PotentialOnGrid& pot) {
  return morawetz_integrand(u, make_morawetz_kernel(pot));
}

double morawetz_integrand_spectral(const Field& u, const PotentialOnGrid& pot) {
  require_valid(u);
  if (!(u.grid == pot.grid)) throw std::invalid_argument("morawetz_integrand: grid mismatch");
  const GridSpec& g = u.grid;
  const std::size_t total = g.total_points();

  std::vector<cplx> rho_hat = density(u);
  fft::forward(g, rho_hat.data());

  double J = 0.0;
  int ix[3];
  std::vector<cplx> work(total);
  for (int axis = 0; axis < g.dim; ++axis) {
    for (std::size_t i = 0; i < total; ++i) {
      g.decode(i, ix);
      const int j = ix[axis];
      const double k = g.is_nyquist(j) ? 0.0 : g.wavenumber(j);
      work[i] = pot.multiplier[i] * cplx{0.0, k} * rho_hat[i];
    }
    fft::inverse(g, work.data());
    for (std::size_t i = 0; i < total; ++i) {
      g.decode(i, ix);
      double r2 = 0.0;
      for (int a = 0; a < g.dim; ++a) {
        const double x = g.coordinate(ix[a]);
        r2 += x * x;
      }
      if (r2 == 0.0) continue;
      const double xhat = g.coordinate(ix[axis]) / std::sqrt(r2);
      J -= xhat * std::norm(u.values[i]) * work[i].real();
    }
  }
  return g.cell_volume() * J;
}

MorawetzReport morawetz_check(const Trajectory& traj, const PotentialOnGrid& pot, double t1,
                              double t2, double sigma, double step_tol) {
  if (!(t1 < t2)) throw std::invalid_argument("morawetz_check: requires t1 < t2");

  MorawetzReport rep;
  rep.t1 = t1;
  rep.t2 = t2;
  rep.sigma = sigma;

  std::vector<const Field*> fields;
  for (const Field& f : traj.snapshots)
    if (f.time >= t1 - 1e-12 && f.time <= t2 + 1e-12) fields.push_back(&f);
  if (fields.size() < 8)
    throw std::invalid_argument("morawetz_check: fewer than 8 snapshots in the interval");

  const MorawetzKernel kernel = make_morawetz_kernel(pot);
  for (const Field* f : fields) {
    rep.sample_times.push_back(f->time);
    rep.integrand_values.push_back(morawetz_integrand(*f, kernel));
  }
  rep.lhs = trapezoid(rep.sample_times, rep.integrand_values);
  rep.integrand_min = *std::min_element(rep.integrand_values.begin(), rep.integrand_values.end());

  rep.rhs_boundary = dilation_quantity(*fields.back(), sigma) -
                     dilation_quantity(*fields.front(), sigma);

  double grad_sup = 0.0;
  for (const DiagnosticsRow& row : traj.rows)
    grad_sup = std::max(grad_sup, std::sqrt(2.0 * row.kinetic));
  const double l2 = std::sqrt(traj.rows.front().mass);
  rep.rhs_bound = 2.0 * l2 * grad_sup;
  rep.scale = l2 * grad_sup;

  // Per-step monotonicity of the dilation diagnostic within the interval.
  for (std::size_t i = 0; i + 1 < traj.rows.size(); ++i) {
    const auto& a = traj.rows[i];
    const auto& b = traj.rows[i + 1];
    if (a.t < t1 - 1e-12 || b.t > t2 + 1e-12) continue;
    if (b.dilation < a.dilation - step_tol * rep.scale) ++rep.monotonicity_violations;
  }

  const double h = traj.grid.spacing();
  for (double s : {2.0 * h, h, 0.5 * h}) {
    rep.dilation_sigmas.push_back(s);
    rep.dilation_t1.push_back(dilation_quantity(*fields.front(), s));
    rep.dilation_t2.push_back(dilation_quantity(*fields.back(), s));
  }
  return rep;
}

double split_radius(const GridSpec& g, double t) {
  const double at = std::abs(t);
  const double raw = at > 1.0 ? at * std::log(at) : 0.0;
  const double rmax = 2.0 * g.half_length * std::sqrt(static_cast<double>(g.dim));
  return std::clamp(raw, g.spacing(), rmax);
}

SplitFields split_field(const Field& u, double t) {
  require_valid(u);
  const GridSpec& g = u.grid;
  SplitFields out;
  const double at = std::abs(t);
  const double raw = at > 1.0 ? at * std::log(at) : 0.0;
  out.radius = split_radius(g, t);
  out.clamped = raw != out.radius;
  out.internal_part = Field::zero(g, u.time);
  out.external_part = Field::zero(g, u.time);

  const int N = g.points_per_axis;
  int ix[3];
  for (std::size_t i = 0; i < g.total_points(); ++i) {
    g.decode(i, ix);
    double r2 = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      const double x = (ix[a] - N / 2) * g.spacing();
      r2 += x * x;
    }
    if (std::sqrt(r2) < out.radius)
      out.internal_part.values[i] = u.values[i];
    else
      out.external_part.values[i] = u.values[i];
  }
  return out;
}

PropagationReport propagation_check(const Field& u0, const Trajectory& traj, double R,
                                    double tol_scale) {
  require_valid(u0);
  if (!(R > 0.0)) throw std::invalid_argument("propagation_check: R must be positive");
  const GridSpec& g = u0.grid;

  PropagationReport rep;
  rep.R = R;

  const int N = g.points_per_axis;
  const double hn = g.cell_volume();
  int ix[3];
  double weighted = 0.0;
  for (std::size_t i = 0; i < g.total_points(); ++i) {
    g.decode(i, ix);
    double r2 = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      const double x = (ix[a] - N / 2) * g.spacing();
      r2 += x * x;
    }
    weighted += std::min(1.0, std::sqrt(r2) / R) * std::norm(u0.values[i]);
  }
  rep.weighted_initial = hn * weighted;

  double grad_sup = 0.0;
  for (const DiagnosticsRow& row : traj.rows)
    grad_sup = std::max(grad_sup, std::sqrt(2.0 * row.kinetic));
  rep.grad_sup = grad_sup;
  const double l2 = std::sqrt(mass(u0));
  const double t0 = traj.rows.front().t;

  rep.pass = true;
  const double tol = tol_scale * mass(u0);
  for (const Field& f : traj.snapshots) {
    double ext = 0.0;
    for (std::size_t i = 0; i < g.total_points(); ++i) {
      g.decode(i, ix);
      double r2 = 0.0;
      for (int a = 0; a < g.dim; ++a) {
        const double x = (ix[a] - N / 2) * g.spacing();
        r2 += x * x;
      }
      if (std::sqrt(r2) >= R) ext += std::norm(f.values[i]);
    }
    const double lhs = hn * ext;
    const double rhs = rep.weighted_initial + std::abs(f.time - t0) / R * l2 * grad_sup;
    rep.times.push_back(f.time);
    rep.lhs.push_back(lhs);
    rep.rhs.push_back(rhs);
    if (lhs > rhs + tol) rep.pass = false;
  }
  return rep;
}

namespace {

void require_matching_split(const Trajectory& traj, double alpha, double a) {
  if (std::abs(traj.diag.split_alpha - alpha) > 1e-12 ||
      std::abs(traj.diag.split_a - a) > 1e-12)
    throw std::invalid_argument(
        "trajectory diagnostics were recorded with different split parameters");
}

// Trapezoid of row-sampled integrand over [lo, hi] with linear interpolation
// at the window edges.
template <typename F>
double row_integral(const std::vector<DiagnosticsRow>& rows, double lo, double hi, F&& value) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    double ta = rows[i].t, tb = rows[i + 1].t;
    if (tb <= lo || ta >= hi) continue;
    double ya = value(rows[i]), yb = value(rows[i + 1]);
    if (ta < lo) {
      const double w = (lo - ta) / (tb - ta);
      ya = ya + w * (yb - ya);
      ta = lo;
    }
    if (tb > hi) {
      const double w = (hi - rows[i].t) / (rows[i + 1].t - rows[i].t);
      yb = value(rows[i]) + w * (value(rows[i + 1]) - value(rows[i]));
      tb = hi;
    }
    sum += 0.5 * (ya + yb) * (tb - ta);
  }
  return sum;
}

}  // namespace

double internal_norm_integral(const Trajectory& traj, double alpha, double a, double t1,
                              double t2) {
  if (!(t1 >= 1.0)) throw std::invalid_argument("internal_norm_integral: requires t1 >= 1");
  if (!(t1 < t2)) throw std::invalid_argument("internal_norm_integral: requires t1 < t2");
  require_matching_split(traj, alpha, a);
  const double m_exp = alpha + 4.0;
  return row_integral(traj.rows, t1, t2, [&](const DiagnosticsRow& row) {
    const double at = std::abs(row.t);
    const double weight = 1.0 / (at * std::log(std::max(at, 1.0)) + a);
    return weight * std::pow(row.internal_cube, m_exp);
  });
}

std::optional<WindowResult> window_search(const Trajectory& traj, double eps, double ell,
                                          double alpha) {
  if (!(eps > 0.0) || !(ell > 0.0))
    throw std::invalid_argument("window_search: eps and ell must be positive");
  require_matching_split(traj, alpha, traj.diag.split_a);

  const double t_first = traj.rows.front().t;
  const double t_last = traj.rows.back().t;
  const double t1 = std::max(1.0, t_first);
  if (t_last - t1 < ell)
    throw std::invalid_argument("window_search: trajectory shorter than one window");

  const double m_exp = alpha + 4.0;
  auto powered = [&](const DiagnosticsRow& row) { return std::pow(row.internal_cube, m_exp); };

  const double a = traj.diag.split_a;
  WindowResult res;
  res.measured_M = internal_norm_integral(traj, alpha, a, t1, t_last);

  for (int j = 1; t1 + j * ell <= t_last + 1e-12; ++j) {
    const double lo = t1 + (j - 1) * ell;
    const double hi = t1 + j * ell;
    const double K = row_integral(traj.rows, lo, hi, powered);
    if (K <= eps) {
      res.t2 = hi;
      res.window_index = j;
      res.window_integral = K;
      res.log_bound = (1.0 + std::log(t1 + ell)) * std::exp(res.measured_M * ell / eps) - 1.0;
      res.bound = res.log_bound < 700.0 ? std::exp(res.log_bound) : kInfinity;
      return res;
    }
  }
  return std::nullopt;
}

DecayReport decay_scan(const Trajectory& traj, double r) {
  const int n = traj.grid.dim;
  if (!(r > 2.0)) throw std::invalid_argument("decay_scan: requires r > 2");
  if (n >= 3 && !(r <= two_star(n)))
    throw std::invalid_argument("decay_scan: requires r at or below the critical exponent");

  DecayReport rep;
  rep.r = r;

  std::vector<double> times, norms;
  if (r == 4.0 || r == 6.0) {
    for (const DiagnosticsRow& row : traj.rows) {
      times.push_back(row.t);
      norms.push_back(r == 4.0 ? row.l4 : row.l6);
    }
  } else {
    for (const Field& f : traj.snapshots) {
      times.push_back(f.time);
      norms.push_back(lp_norm(f, r));
    }
  }
  const double t_max = times.back();
  if (!(t_max >= 5.0))
    throw std::invalid_argument("decay_scan: trajectory must extend to t >= 5");
  rep.t_lo = t_max / 2.0;
  rep.t_hi = t_max;

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0, increases = 0, in_window = 0;
  double prev = 0.0;
  bool have_prev = false;
  double first_norm = 0.0, last_norm = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < rep.t_lo - 1e-12 || norms[i] <= 0.0 || times[i] <= 0.0) continue;
    const double x = std::log(times[i]);
    const double y = std::log(norms[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
    if (in_window == 0) first_norm = norms[i];
    last_norm = norms[i];
    ++in_window;
    if (have_prev && norms[i] > prev * (1.0 + 1e-12)) ++increases;
    prev = norms[i];
    have_prev = true;
    rep.times.push_back(times[i]);
    rep.norms.push_back(norms[i]);
  }
  if (count < 4) throw std::invalid_argument("decay_scan: too few samples in the fit window");
  const double denom = count * sxx - sx * sx;
  rep.slope = (count * sxy - sx * sy) / denom;
  rep.monotone_decreasing = last_norm < first_norm && increases <= count / 10;
  return rep;
}

double spacetime_norm(const Trajectory& traj, double q, double r, double t1, double t2) {
  if (q < 1.0 || r < 1.0) throw std::invalid_argument("spacetime_norm: requires q, r >= 1");
  std::vector<double> times, norms;
  for (const Field& f : traj.snapshots) {
    if (f.time < t1 - 1e-12 || f.time > t2 + 1e-12) continue;
    times.push_back(f.time);
    norms.push_back(lp_norm(f, r));
  }
  if (std::isinf(q)) {
    double sup = 0.0;
    for (double v : norms) sup = std::max(sup, v);
    return sup;
  }
  if (times.size() < 2)
    throw std::invalid_argument("spacetime_norm: needs at least two snapshots in the interval");
  std::vector<double> powered(norms.size());
  for (std::size_t i = 0; i < norms.size(); ++i) powered[i] = std::pow(norms[i], q);
  return std::pow(trapezoid(times, powered), 1.0 / q);
}

}  // namespace hs
