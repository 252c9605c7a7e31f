// Periodic box discretization and the complex fields living on it.
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace hs {

using cplx = std::complex<double>;

// Uniform grid on the periodic box [-L, L)^n, n in {1,2,3}. Coordinates are
// x_i = -L + i*h with h = 2L/N. The DFT wavenumber of index j is
// k_j = pi*j/L with j interpreted in the standard order
// (0, 1, ..., N/2-1, -N/2, ..., -1). Storage is row-major with the last
// axis fastest.
struct GridSpec {
  int dim = 0;
  int points_per_axis = 0;
  double half_length = 0.0;

  double spacing() const { return 2.0 * half_length / points_per_axis; }
  std::size_t total_points() const;
  double cell_volume() const;  // h^n

  int signed_index(int idx) const {
    return idx < points_per_axis / 2 ? idx : idx - points_per_axis;
  }
  bool is_nyquist(int idx) const { return idx == points_per_axis / 2; }
  double wavenumber(int idx) const;   // pi * signed_index / L
  double coordinate(int idx) const;   // -L + idx*h

  // Decode a flat row-major index into per-axis indices (dim entries).
  void decode(std::size_t flat, int out[3]) const;

  bool operator==(const GridSpec&) const = default;
};

GridSpec make_grid(int dim, int points_per_axis, double half_length);

struct Field {
  GridSpec grid;
  std::vector<cplx> values;
  double time = 0.0;

  static Field zero(const GridSpec& g, double t = 0.0);
  bool all_finite() const;
};

// Ensure two fields live on the same grid; throws std::invalid_argument.
void require_same_grid(const Field& a, const Field& b);
void require_valid(const Field& f);

}  // namespace hs
