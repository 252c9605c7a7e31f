#include "hs/potential.hpp"

#include "hs/exponents.hpp"
#include "hs/fft.hpp"
#include "hs/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <memory>
#include <stdexcept>
#include <unordered_map>

namespace hs {
namespace {

double sphere_area(int n) {
  switch (n) {
    case 1: return 2.0;
    case 2: return 2.0 * M_PI;
    case 3: return 4.0 * M_PI;
  }
  throw std::invalid_argument("unsupported dimension");
}

// Tensor Gauss integral of f(|x|) over an axis-aligned box [lo, lo+s]^n.
template <typename F>
double box_integral(F&& f, int n, const double lo[3], double s, int order = 8) {
  static const auto gl8 = gauss_legendre(8);
  std::vector<std::pair<double, double>> custom;
  const auto* nodes_ptr = &gl8;
  if (order != 8) {
    custom = gauss_legendre(order);
    nodes_ptr = &custom;
  }
  const auto& nodes = *nodes_ptr;
  double sum = 0.0;
  const double half = 0.5 * s;
  const int q = static_cast<int>(nodes.size());
  int idx[3] = {0, 0, 0};
  const int count = static_cast<int>(std::pow(q, n));
  for (int flat = 0; flat < count; ++flat) {
    int rem = flat;
    double w = 1.0, r2 = 0.0;
    for (int a = 0; a < n; ++a) {
      idx[a] = rem % q;
      rem /= q;
      const double x = lo[a] + half * (nodes[idx[a]].first + 1.0);
      w *= nodes[idx[a]].second * half;
      r2 += x * x;
    }
    sum += w * f(std::sqrt(r2));
  }
  return sum;
}

// Integral of f(|x|) over the cell [-h/2, h/2]^n with an integrable power
// singularity at the origin: dyadic subdivision of the corner octant, each
// annular shell handled by smooth tensor quadrature.
template <typename F>
double singular_cell_integral(F&& f, int n, double h) {
  const double s0 = h / 2.0;
  double total = 0.0;
  double s = s0;
  for (int depth = 0; depth < 60; ++depth) {
    const double half = s / 2.0;
    double shell = 0.0;
    // The 2^n - 1 sub-boxes of [0,s]^n away from the origin corner.
    for (int mask = 1; mask < (1 << n); ++mask) {
      double lo[3] = {0.0, 0.0, 0.0};
      for (int a = 0; a < n; ++a)
        if (mask & (1 << a)) lo[a] = half;
      shell += box_integral(f, n, lo, half);
    }
    total += shell;
    if (depth > 4 && shell < 1e-16 * total) break;
    s = half;
  }
  return total * (1 << n);  // octant symmetry
}

// Refined one-dimensional radial L^p diagnostics. Integrates
// omega_{n-1} r^{n-1} |v(r)|^p over [lo, hi] with log-spaced midpoint panels.
double radial_power_integral(const std::function<double(double)>& v, double p, int n,
                             double lo, double hi, int panels_per_octave = 48) {
  if (!(hi > lo) || lo <= 0.0) return 0.0;
  const double octaves = std::log2(hi / lo);
  const int panels = std::max(16, static_cast<int>(std::ceil(octaves * panels_per_octave)));
  const double step = std::log(hi / lo) / panels;
  double sum = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double r = lo * std::exp((i + 0.5) * step);
    const double dr = lo * (std::exp((i + 1.0) * step) - std::exp(i * step));
    sum += std::pow(std::abs(v(r)), p) * std::pow(r, n - 1) * dr;
  }
  return sphere_area(n) * sum;
}

// A radial L^p norm over (0, a] or [a, inf) is declared infinite when pushing
// the cutoff by twenty more octaves grows the integral by more than 5%.
bool radial_norm_finite(const std::function<double(double)>& v, double p, int n, double a,
                        bool near_origin) {
  if (std::isinf(p)) {
    double sup20 = 0.0, sup40 = 0.0;
    for (int k = 1; k <= 40; ++k) {
      const double r = near_origin ? a * std::pow(2.0, -k) : a * std::pow(2.0, k);
      const double val = std::abs(v(r));
      if (k <= 20) sup20 = std::max(sup20, val);
      sup40 = std::max(sup40, val);
    }
    return sup40 <= sup20 * 1.05 + 1e-300;
  }
  double i20, i40;
  if (near_origin) {
    i20 = radial_power_integral(v, p, n, a * std::pow(2.0, -20), a);
    i40 = radial_power_integral(v, p, n, a * std::pow(2.0, -40), a);
  } else {
    i20 = radial_power_integral(v, p, n, a, a * std::pow(2.0, 20));
    i40 = radial_power_integral(v, p, n, a, a * std::pow(2.0, 40));
  }
  if (i20 == 0.0) return i40 == 0.0;
  return i40 <= i20 * 1.05;
}

// Shared sampler: builds grid samples, the convolution multiplier, and
// wires up the radial evaluators.
PotentialOnGrid build_on_grid(const GridSpec& grid, const PotentialSpec& spec, int mollify_j,
                              std::function<double(double)> radial,
                              std::function<double(double)> radial_deriv,
                              double origin_value) {
  PotentialOnGrid pot;
  pot.grid = grid;
  pot.spec = spec;
  pot.mollify_j = mollify_j;
  pot.origin_cell_value = origin_value;
  pot.radial = std::move(radial);
  pot.radial_deriv = std::move(radial_deriv);

  const int N = grid.points_per_axis;
  const double h = grid.spacing();
  const std::size_t total = grid.total_points();

  // Values depend only on the integer squared lattice radius.
  std::unordered_map<long long, double> memo;
  auto value_at = [&](long long key2) {
    if (key2 == 0) return pot.origin_cell_value;
    auto it = memo.find(key2);
    if (it != memo.end()) return it->second;
    const double val = pot.radial(h * std::sqrt(static_cast<double>(key2)));
    memo.emplace(key2, val);
    return val;
  };

  pot.samples.resize(total);
  std::vector<cplx> disp(total);
  int ix[3];
  for (std::size_t i = 0; i < total; ++i) {
    grid.decode(i, ix);
    long long key_x = 0, key_d = 0;
    for (int a = 0; a < grid.dim; ++a) {
      const long long mx = ix[a] - N / 2;           // physical layout offset
      const long long md = grid.signed_index(ix[a]); // displacement layout
      key_x += mx * mx;
      key_d += md * md;
    }
    pot.samples[i] = value_at(key_x);
    disp[i] = cplx{value_at(key_d), 0.0};
  }

  fft::forward(grid, disp.data());
  const double hn = grid.cell_volume();
  for (cplx& c : disp) c *= hn;
  pot.multiplier = std::move(disp);
  return pot;
}

}  // namespace

PotentialSpec PotentialSpec::zero_potential() { return PotentialSpec{}; }

PotentialSpec PotentialSpec::inverse_power(double C, double gamma) {
  if (C == 0.0) throw std::invalid_argument("inverse_power: C must be nonzero");
  PotentialSpec s;
  s.kind = PotentialKind::inverse_power;
  s.strength = C;
  s.power = gamma;
  return s;
}

PotentialSpec PotentialSpec::tabulated(std::vector<std::pair<double, double>> samples) {
  if (samples.size() < 2) throw std::invalid_argument("tabulated: needs at least two samples");
  if (!std::is_sorted(samples.begin(), samples.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; }))
    throw std::invalid_argument("tabulated: radii must be sorted increasing");
  if (samples.front().first < 0.0)
    throw std::invalid_argument("tabulated: radii must be nonnegative");
  PotentialSpec s;
  s.kind = PotentialKind::tabulated_radial;
  s.table = std::move(samples);
  return s;
}

double PotentialSpec::radial_value(double r) const {
  if (r < truncate_inner) return 0.0;
  if (truncate_outer > 0.0 && r > truncate_outer) return 0.0;
  switch (kind) {
    case PotentialKind::zero:
      return 0.0;
    case PotentialKind::inverse_power:
      return strength * std::pow(r, -power);
    case PotentialKind::tabulated_radial: {
      if (r <= table.front().first) return table.front().second;
      if (r >= table.back().first) return 0.0;
      auto it = std::upper_bound(table.begin(), table.end(), r,
                                 [](double x, const auto& s) { return x < s.first; });
      const auto& hi = *it;
      const auto& lo = *(it - 1);
      const double w = (r - lo.first) / (hi.first - lo.first);
      return lo.second + w * (hi.second - lo.second);
    }
  }
  return 0.0;
}

double PotentialSpec::radial_derivative(double r) const {
  if (r < truncate_inner) return 0.0;
  if (truncate_outer > 0.0 && r > truncate_outer) return 0.0;
  switch (kind) {
    case PotentialKind::zero:
      return 0.0;
    case PotentialKind::inverse_power:
      return -power * strength * std::pow(r, -power - 1.0);
    case PotentialKind::tabulated_radial: {
      if (r <= table.front().first || r >= table.back().first) return 0.0;
      auto it = std::upper_bound(table.begin(), table.end(), r,
                                 [](double x, const auto& s) { return x < s.first; });
      const auto& hi = *it;
      const auto& lo = *(it - 1);
      return (hi.second - lo.second) / (hi.first - lo.first);
    }
  }
  return 0.0;
}

PotentialOnGrid sample_potential(const PotentialSpec& spec, const GridSpec& grid) {
  if (spec.kind == PotentialKind::inverse_power) {
    if (!(spec.power > 0.0) || spec.power >= grid.dim)
      throw std::invalid_argument(
          "sample_potential: inverse power requires 0 < gamma < n (origin cell average diverges)");
  }
  double origin = 0.0;
  if (!spec.is_zero()) {
    const double h = grid.spacing();
    auto f = [&](double r) { return spec.radial_value(r); };
    origin = singular_cell_integral(f, grid.dim, h) / grid.cell_volume();
  }
  return build_on_grid(grid, spec, 0,
                       [spec](double r) { return spec.radial_value(r); },
                       [spec](double r) { return spec.radial_derivative(r); }, origin);
}

Field convolve_density(const PotentialOnGrid& pot, const Field& rho, bool warn_signed,
                       ConvolveStats* stats) {
  require_valid(rho);
  if (!(rho.grid == pot.grid))
    throw std::invalid_argument("convolve_density: field grid does not match potential grid");

  double min_in = 0.0, max_in = 0.0;
  for (const cplx& v : rho.values) {
    min_in = std::min(min_in, v.real());
    max_in = std::max(max_in, std::abs(v.real()));
  }
  if (warn_signed && min_in < -1e-12 * std::max(1.0, max_in))
    std::cerr << "convolve_density: input density has negative entries (min " << min_in << ")\n";

  std::vector<cplx> hat = fft::forward_copy(rho.grid, rho.values);
  const std::size_t total = rho.grid.total_points();
  for (std::size_t i = 0; i < total; ++i) hat[i] *= pot.multiplier[i];
  fft::inverse(rho.grid, hat.data());

  double max_re = 0.0, max_im = 0.0;
  for (const cplx& v : hat) {
    max_re = std::max(max_re, std::abs(v.real()));
    max_im = std::max(max_im, std::abs(v.imag()));
  }
  Field out;
  out.grid = rho.grid;
  out.time = rho.time;
  out.values.resize(total);
  for (std::size_t i = 0; i < total; ++i) out.values[i] = cplx{hat[i].real(), 0.0};
  if (stats) {
    stats->min_input = min_in;
    stats->imag_residue = max_re > 0.0 ? max_im / max_re : max_im;
  }
  return out;
}

H1Report check_H1(const PotentialOnGrid& pot, double p1, double p2, double a) {
  if (!(p2 >= 1.0) || p2 > p1)
    throw std::invalid_argument("check_H1: requires 1 <= p2 <= p1");
  if (!(a > 0.0)) throw std::invalid_argument("check_H1: split radius must be positive");
  const GridSpec& g = pot.grid;
  const int n = g.dim;

  H1Report rep;
  rep.p1 = p1;
  rep.p2 = p2;
  rep.split_radius = a;

  // Grid quadrature of the two pieces.
  const double hn = g.cell_volume();
  double near_sum = 0.0, far_sum = 0.0, near_sup = 0.0, far_sup = 0.0;
  const int N = g.points_per_axis;
  int ix[3];
  for (std::size_t i = 0; i < g.total_points(); ++i) {
    g.decode(i, ix);
    double r2 = 0.0;
    for (int ax = 0; ax < n; ++ax) {
      const double d = (ix[ax] - N / 2) * g.spacing();
      r2 += d * d;
    }
    const double r = std::sqrt(r2);
    const double av = std::abs(pot.samples[i]);
    if (r <= a) {
      near_sup = std::max(near_sup, av);
      if (!std::isinf(p2)) near_sum += std::pow(av, p2);
    }
    if (r >= a) {
      far_sup = std::max(far_sup, av);
      if (!std::isinf(p1)) far_sum += std::pow(av, p1);
    }
  }
  rep.near_norm = std::isinf(p2) ? near_sup : std::pow(hn * near_sum, 1.0 / p2);
  rep.far_norm = std::isinf(p1) ? far_sup : std::pow(hn * far_sum, 1.0 / p1);

  rep.near_finite = radial_norm_finite(pot.radial, p2, n, a, /*near_origin=*/true);
  rep.far_finite = radial_norm_finite(pot.radial, p1, n, a, /*near_origin=*/false);

  rep.window_cauchy = p2 > n / 4.0;
  rep.window_wave_operator = p1 <= n / 2.0;
  rep.window_completeness = p1 < n / 2.0;
  rep.window_decay = p1 < static_cast<double>(n);
  rep.pass = rep.near_finite && rep.far_finite && p2 >= std::max(1.0, n / 4.0);
  return rep;
}

H2Report check_H2(const PotentialOnGrid& pot, double a) {
  const GridSpec& g = pot.grid;
  const int n = g.dim;
  H2Report rep;

  auto neg_part = [rad = pot.radial](double r) { return std::max(-rad(r), 0.0); };

  const double hn = g.cell_volume();
  const double p_near = n / 2.0;
  double near_sum = 0.0, far_sup = 0.0, most_negative = 0.0;
  const int N = g.points_per_axis;
  int ix[3];
  for (std::size_t i = 0; i < g.total_points(); ++i) {
    g.decode(i, ix);
    double r2 = 0.0;
    for (int ax = 0; ax < n; ++ax) {
      const double d = (ix[ax] - N / 2) * g.spacing();
      r2 += d * d;
    }
    const double r = std::sqrt(r2);
    const double neg = std::max(-pot.samples[i], 0.0);
    most_negative = std::max(most_negative, neg);
    if (r <= a) near_sum += std::pow(neg, p_near);
    if (r >= a) far_sup = std::max(far_sup, neg);
  }
  rep.near_norm = std::pow(hn * near_sum, 1.0 / p_near);
  rep.far_norm = far_sup;
  rep.trivially_nonnegative = most_negative == 0.0;

  rep.near_finite = rep.trivially_nonnegative ||
                    radial_norm_finite(neg_part, p_near, n, a, /*near_origin=*/true);
  rep.far_finite = rep.trivially_nonnegative ||
                   radial_norm_finite(neg_part, kInfinity, n, a, /*near_origin=*/false);
  rep.pass = rep.near_finite && rep.far_finite;
  return rep;
}

H3Report check_H3(const PotentialOnGrid& pot, double alpha, double a) {
  if (!(alpha >= 2.0)) throw std::invalid_argument("check_H3: requires alpha >= 2");
  if (!(a > 0.0)) throw std::invalid_argument("check_H3: requires a > 0");
  H3Report rep;
  rep.alpha = alpha;
  rep.radius = a;

  // Radii to scan: table nodes when available (difference quotients are then
  // exact for piecewise-linear profiles), otherwise a dense uniform scan.
  std::vector<double> radii;
  if (pot.spec.kind == PotentialKind::tabulated_radial && pot.mollify_j == 0) {
    for (const auto& [r, v] : pot.spec.table)
      if (r > 0.0 && r <= a) radii.push_back(r);
    if (radii.empty() || radii.back() < a) radii.push_back(a);
  } else {
    const int M = 2000;
    radii.reserve(M);
    for (int i = 1; i <= M; ++i) radii.push_back(a * i / M);
  }

  std::vector<double> vals(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) vals[i] = pot.radial(radii[i]);

  // Monotonicity over the whole sampled range of the box.
  const double r_max = pot.grid.half_length * std::sqrt(static_cast<double>(pot.grid.dim));
  double scale = 0.0;
  for (double v : vals) scale = std::max(scale, std::abs(v));
  rep.monotone = true;
  {
    const int M = 2000;
    double prev = pot.radial(r_max / M);
    for (int i = 2; i <= M; ++i) {
      const double cur = pot.radial(r_max * i / M);
      if (cur > prev + 1e-12 * std::max(1.0, scale)) {
        rep.monotone = false;
        break;
      }
      prev = cur;
    }
  }

  std::vector<double> r_pow(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) r_pow[i] = std::pow(radii[i], alpha);
  double best = kInfinity;
  for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
    for (std::size_t k = i + 1; k < radii.size(); ++k) {
      const double denom = r_pow[k] - r_pow[i];
      if (denom <= 0.0) continue;
      const double quot = alpha * (vals[i] - vals[k]) / denom;
      best = std::min(best, quot);
    }
  }
  rep.best_A = std::isinf(best) ? 0.0 : best;

  // Reference coarse quotient sets the scale that separates "power-law
  // decrease" from "flat at the origin".
  const double ref = alpha * (pot.radial(a / 2) - pot.radial(a)) /
                     (std::pow(a, alpha) - std::pow(a / 2, alpha));
  rep.pass = rep.monotone && ref > 0.0 && rep.best_A > 1e-6 * ref;
  return rep;
}

PotentialOnGrid regularize(const PotentialSpec& spec, int j, const GridSpec& grid,
                           int quadrature_order) {
  if (j < 2) throw std::invalid_argument("regularize: requires j >= 2");
  if (quadrature_order < 2) throw std::invalid_argument("regularize: quadrature order too small");
  const int n = grid.dim;

  // Tensor Gauss nodes weighted by the standard bump, normalized against the
  // quadrature itself so a constant potential is reproduced exactly.
  const auto gl = gauss_legendre(quadrature_order);
  struct Node {
    double dist;    // |e1 - z/j|
    double weight;
  };
  auto nodes = std::make_shared<std::vector<Node>>();
  double mass_total = 0.0;
  const int q = quadrature_order;
  const int count = static_cast<int>(std::pow(q, n));
  for (int flat = 0; flat < count; ++flat) {
    int rem = flat;
    double z[3] = {0.0, 0.0, 0.0};
    double w = 1.0;
    for (int a = 0; a < n; ++a) {
      const int idx = rem % q;
      rem /= q;
      z[a] = gl[idx].first;
      w *= gl[idx].second;
    }
    double z2 = 0.0;
    for (int a = 0; a < n; ++a) z2 += z[a] * z[a];
    if (z2 >= 1.0) continue;
    const double phi = std::exp(-1.0 / (1.0 - z2));
    double d2 = (1.0 - z[0] / j) * (1.0 - z[0] / j);
    for (int a = 1; a < n; ++a) d2 += (z[a] / j) * (z[a] / j);
    nodes->push_back({std::sqrt(d2), w * phi});
    mass_total += w * phi;
  }
  for (Node& node : *nodes) node.weight /= mass_total;

  auto mollified = [nodes, spec](double r) {
    double sum = 0.0;
    for (const Node& node : *nodes) sum += node.weight * spec.radial_value(r * node.dist);
    return sum;
  };
  auto mollified_deriv = [nodes, spec](double r) {
    double sum = 0.0;
    for (const Node& node : *nodes)
      sum += node.weight * node.dist * spec.radial_derivative(r * node.dist);
    return sum;
  };

  // Origin cell average. For a pure inverse power the mollification is the
  // same power law scaled by g_j, so the analytic cell average carries over.
  double origin = 0.0;
  const double h = grid.spacing();
  const double cell_reach = (1.0 + 1.0 / j) * h * std::sqrt(static_cast<double>(n)) / 2.0;
  if (spec.kind == PotentialKind::inverse_power && spec.truncate_inner == 0.0 &&
      (spec.truncate_outer == 0.0 || spec.truncate_outer > cell_reach)) {
    double gj = 0.0;
    for (const Node& node : *nodes) gj += node.weight * std::pow(node.dist, -spec.power);
    auto f = [&](double r) { return spec.radial_value(r); };
    origin = gj * singular_cell_integral(f, n, h) / grid.cell_volume();
  } else if (!spec.is_zero()) {
    const double lo[3] = {-h / 2, -h / 2, -h / 2};
    origin = box_integral(mollified, n, lo, h) / grid.cell_volume();
  }

  return build_on_grid(grid, spec, j, mollified, mollified_deriv, origin);
}

double potential_lp_norm(const PotentialOnGrid& pot, double p) {
  if (p < 1.0) throw std::invalid_argument("potential_lp_norm: requires p >= 1");
  if (std::isinf(p)) {
    double sup = 0.0;
    for (double v : pot.samples) sup = std::max(sup, std::abs(v));
    return sup;
  }
  double sum = 0.0;
  for (double v : pot.samples) sum += std::pow(std::abs(v), p);
  return std::pow(pot.grid.cell_volume() * sum, 1.0 / p);
}

}  // namespace hs
