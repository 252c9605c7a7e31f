#include "hs/initial_data.hpp"

#include "hs/fft.hpp"
#include "hs/field_io.hpp"
#include "hs/norms.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace hs {
namespace {

// Deterministic standard normals: mt19937_64 + explicit Box-Muller, since
// std::normal_distribution is implementation-defined.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}
  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    spare_ = mag * std::sin(2.0 * M_PI * u2);
    have_spare_ = true;
    return mag * std::cos(2.0 * M_PI * u2);
  }

 private:
  double uniform() {
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  }
  std::mt19937_64 rng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace

Field generate_initial_data(const InitialDataSpec& spec, const GridSpec& grid) {
  Field f = Field::zero(grid);

  switch (spec.kind) {
    case InitialDataKind::gaussian: {
      if (!(spec.width > 0.0)) throw std::invalid_argument("gaussian data: width must be positive");
      const std::size_t total = grid.total_points();
      int ix[3];
      for (std::size_t i = 0; i < total; ++i) {
        grid.decode(i, ix);
        double r2 = 0.0, phase = 0.0;
        for (int a = 0; a < grid.dim; ++a) {
          const double x = grid.coordinate(ix[a]);
          const double d = x - spec.center[a];
          r2 += d * d;
          phase += spec.velocity[a] * x;
        }
        const double amp = spec.amplitude * std::exp(-r2 / (2.0 * spec.width * spec.width));
        f.values[i] = amp * cplx{std::cos(phase), std::sin(phase)};
      }
      break;
    }
    case InitialDataKind::random_band_limited: {
      const double nyq = M_PI * grid.points_per_axis / (2.0 * grid.half_length);
      if (!(spec.band > 0.0) || spec.band > nyq)
        throw std::invalid_argument("random data: band must lie in (0, Nyquist]");
      GaussianStream gs(spec.seed);
      const std::size_t total = grid.total_points();
      int ix[3];
      for (std::size_t i = 0; i < total; ++i) {
        grid.decode(i, ix);
        double k2 = 0.0;
        for (int a = 0; a < grid.dim; ++a) {
          const double k = grid.wavenumber(ix[a]);
          k2 += k * k;
        }
        // Coefficients are drawn in flat index order so the field is a pure
        // function of (seed, grid).
        const double re = gs.next();
        const double im = gs.next();
        if (std::sqrt(k2) <= spec.band) f.values[i] = cplx{re, im};
      }
      fft::inverse(grid, f.values.data());
      const double l2 = std::sqrt(mass(f));
      const double target = spec.amplitude;
      if (l2 > 0.0)
        for (cplx& v : f.values) v *= target / l2;
      break;
    }
    case InitialDataKind::from_file: {
      Field loaded = read_field(spec.path);
      if (!(loaded.grid == grid))
        throw std::invalid_argument("from_file data: grid in file does not match configuration");
      f = std::move(loaded);
      break;
    }
  }

  if (spec.normalize_l2 > 0.0) {
    const double l2 = std::sqrt(mass(f));
    if (l2 == 0.0) throw std::invalid_argument("cannot normalize a zero field");
    for (cplx& v : f.values) v *= spec.normalize_l2 / l2;
  }
  return f;
}

}  // namespace hs
