#include "hs/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hs {

std::size_t GridSpec::total_points() const {
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(points_per_axis);
  return total;
}

double GridSpec::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= spacing();
  return v;
}

double GridSpec::wavenumber(int idx) const {
  return M_PI * signed_index(idx) / half_length;
}

double GridSpec::coordinate(int idx) const {
  return -half_length + idx * spacing();
}

void GridSpec::decode(std::size_t flat, int out[3]) const {
  const auto n = static_cast<std::size_t>(points_per_axis);
  for (int a = dim - 1; a >= 0; --a) {
    out[a] = static_cast<int>(flat % n);
    flat /= n;
  }
}

GridSpec make_grid(int dim, int points_per_axis, double half_length) {
  if (dim < 1 || dim > 3)
    throw std::invalid_argument("make_grid: dimension must be 1, 2 or 3, got " +
                                std::to_string(dim));
  if (points_per_axis < 8 || points_per_axis % 2 != 0)
    throw std::invalid_argument("make_grid: points per axis must be even and >= 8, got " +
                                std::to_string(points_per_axis));
  if (!(half_length > 0.0) || !std::isfinite(half_length))
    throw std::invalid_argument("make_grid: half length must be positive");
  return GridSpec{dim, points_per_axis, half_length};
}

Field Field::zero(const GridSpec& g, double t) {
  Field f;
  f.grid = g;
  f.values.assign(g.total_points(), cplx{0.0, 0.0});
  f.time = t;
  return f;
}

bool Field::all_finite() const {
  for (const cplx& v : values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

void require_same_grid(const Field& a, const Field& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("fields live on different grids");
}

void require_valid(const Field& f) {
  if (f.values.size() != f.grid.total_points())
    throw std::invalid_argument("field value count does not match its grid");
}

}  // namespace hs
