#include "hs/norms.hpp"

#include "hs/fft.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hs {

double lp_norm(const Field& f, double r) {
  require_valid(f);
  if (r < 1.0) throw std::invalid_argument("lp_norm: requires r >= 1");
  if (std::isinf(r)) {
    double sup = 0.0;
    for (const cplx& v : f.values) sup = std::max(sup, std::abs(v));
    return sup;
  }
  double sum = 0.0;
  for (const cplx& v : f.values) sum += std::pow(std::abs(v), r);
  return std::pow(f.grid.cell_volume() * sum, 1.0 / r);
}

double mass(const Field& f) {
  require_valid(f);
  double sum = 0.0;
  for (const cplx& v : f.values) sum += std::norm(v);
  return f.grid.cell_volume() * sum;
}

double h1_norm(const Field& f) { return lp_norm(f, 2.0) + gradient_l2_norm(f); }

double cube_norm(const Field& f, double m, double r, double edge) {
  require_valid(f);
  if (m < 1.0 || r < 1.0) throw std::invalid_argument("cube_norm: requires m, r >= 1");
  const GridSpec& g = f.grid;
  const double h = g.spacing();
  const double ratio = edge / h;
  const int k = static_cast<int>(std::lround(ratio));
  if (k < 1 || std::abs(ratio - k) > 1e-9 * std::max(1.0, ratio))
    throw std::invalid_argument("cube_norm: edge must be a positive integer multiple of the grid spacing");

  const int N = g.points_per_axis;
  const int cubes_per_axis = (N + k - 1) / k;
  std::size_t n_cubes = 1;
  for (int a = 0; a < g.dim; ++a) n_cubes *= static_cast<std::size_t>(cubes_per_axis);

  // Accumulate sum of |f|^r (or the sup for r = inf) per cube.
  std::vector<double> acc(n_cubes, 0.0);
  const bool r_inf = std::isinf(r);
  int ix[3];
  const std::size_t total = g.total_points();
  for (std::size_t i = 0; i < total; ++i) {
    g.decode(i, ix);
    std::size_t cube = 0;
    for (int a = 0; a < g.dim; ++a) cube = cube * cubes_per_axis + ix[a] / k;
    const double av = std::abs(f.values[i]);
    if (r_inf)
      acc[cube] = std::max(acc[cube], av);
    else
      acc[cube] += std::pow(av, r);
  }

  const double hn = g.cell_volume();
  const bool m_inf = std::isinf(m);
  double agg = 0.0;
  for (double c : acc) {
    const double cube_lr = r_inf ? c : std::pow(hn * c, 1.0 / r);
    if (m_inf)
      agg = std::max(agg, cube_lr);
    else
      agg += std::pow(cube_lr, m);
  }
  return m_inf ? agg : std::pow(agg, 1.0 / m);
}

}  // namespace hs
