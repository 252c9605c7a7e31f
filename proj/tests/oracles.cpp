#include "oracles.hpp"

#include <cmath>

namespace oracle {

using cplx = std::complex<double>;

namespace {

// Free evolution of a unit-amplitude centered Gaussian, single image:
//   (1 + i t / w^2)^{-n/2} exp(-|y|^2 / (2 (w^2 + i t)))
cplx base_gaussian(int n, double w, double t, double y2) {
  const cplx denom{w * w, t};
  const cplx pref = std::pow(cplx{1.0, t / (w * w)}, -0.5 * n);
  return pref * std::exp(-y2 / (2.0 * denom));
}

}  // namespace

cplx free_gaussian_value(const GaussianPacket& p, const hs::GridSpec& g, double t,
                         const double x[3], int image_shells) {
  const int n = g.dim;
  const double L = g.half_length;
  cplx sum{0.0, 0.0};
  double v2 = 0.0;
  for (int a = 0; a < n; ++a) v2 += p.velocity[a] * p.velocity[a];

  int shift[3] = {0, 0, 0};
  const int span = 2 * image_shells + 1;
  int count = 1;
  for (int a = 0; a < n; ++a) count *= span;
  for (int flat = 0; flat < count; ++flat) {
    int rem = flat;
    for (int a = 0; a < n; ++a) {
      shift[a] = rem % span - image_shells;
      rem /= span;
    }
    // Galilei boost of the resting packet: the image lives at
    // x + 2L m; y = x + 2Lm - c - v t.
    double y2 = 0.0, phase = 0.0;
    for (int a = 0; a < n; ++a) {
      const double xi = x[a] + 2.0 * L * shift[a];
      const double y = xi - p.center[a] - p.velocity[a] * t;
      y2 += y * y;
      phase += p.velocity[a] * xi;
    }
    phase -= 0.5 * v2 * t;
    sum += cplx{std::cos(phase), std::sin(phase)} * base_gaussian(n, p.width, t, y2);
  }
  return p.amplitude * sum;
}

hs::Field free_gaussian_field(const GaussianPacket& p, const hs::GridSpec& g, double t,
                              int image_shells) {
  hs::Field f = hs::Field::zero(g, t);
  int ix[3];
  double x[3] = {0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < g.total_points(); ++i) {
    g.decode(i, ix);
    for (int a = 0; a < g.dim; ++a) x[a] = g.coordinate(ix[a]);
    f.values[i] = free_gaussian_value(p, g, t, x, image_shells);
  }
  return f;
}

double sup_relative_error(const hs::Field& num, const hs::Field& ref) {
  double sup_err = 0.0, sup_ref = 0.0;
  for (std::size_t i = 0; i < num.values.size(); ++i) {
    sup_err = std::max(sup_err, std::abs(num.values[i] - ref.values[i]));
    sup_ref = std::max(sup_ref, std::abs(ref.values[i]));
  }
  return sup_ref > 0.0 ? sup_err / sup_ref : sup_err;
}

std::vector<double> brute_convolve(const hs::PotentialOnGrid& pot,
                                   const std::vector<double>& rho) {
  const hs::GridSpec& g = pot.grid;
  const int N = g.points_per_axis;
  const int n = g.dim;
  const std::size_t total = g.total_points();
  const double hn = g.cell_volume();

  // Kernel value by displacement index (periodic), from the physical-layout
  // samples: displacement d maps to physical index (d + N/2) mod N.
  auto kernel = [&](int dx, int dy, int dz) {
    std::size_t idx = 0;
    const int d[3] = {dx, dy, dz};
    for (int a = 0; a < n; ++a) {
      int m = ((d[a] % N) + N) % N;
      idx = idx * N + static_cast<std::size_t>((m + N / 2) % N);
    }
    return pot.samples[idx];
  };

  std::vector<double> out(total, 0.0);
  int ix[3] = {0, 0, 0}, iy[3] = {0, 0, 0};
  for (std::size_t i = 0; i < total; ++i) {
    g.decode(i, ix);
    double sum = 0.0;
    for (std::size_t k = 0; k < total; ++k) {
      g.decode(k, iy);
      sum += kernel(ix[0] - iy[0], n > 1 ? ix[1] - iy[1] : 0, n > 2 ? ix[2] - iy[2] : 0) * rho[k];
    }
    out[i] = hn * sum;
  }
  return out;
}

double brute_hartree(const hs::PotentialOnGrid& pot, const hs::Field& u) {
  const hs::GridSpec& g = pot.grid;
  std::vector<double> rho(u.values.size());
  for (std::size_t i = 0; i < u.values.size(); ++i) rho[i] = std::norm(u.values[i]);
  const std::vector<double> w = brute_convolve(pot, rho);
  double sum = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) sum += rho[i] * w[i];
  return 0.5 * g.cell_volume() * sum;
}

double brute_morawetz_pair_sum(const hs::PotentialOnGrid& pot, const hs::Field& u) {
  const hs::GridSpec& g = pot.grid;
  const int N = g.points_per_axis;
  const int n = g.dim;
  const double h = g.spacing();
  const std::size_t total = g.total_points();

  std::vector<double> rho(total);
  for (std::size_t i = 0; i < total; ++i) rho[i] = std::norm(u.values[i]);

  int ix[3] = {0, 0, 0}, iy[3] = {0, 0, 0};
  double sum = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    if (rho[i] == 0.0) continue;
    g.decode(i, ix);
    double xr2 = 0.0, xc[3] = {0.0, 0.0, 0.0};
    for (int a = 0; a < n; ++a) {
      xc[a] = (ix[a] - N / 2) * h;
      xr2 += xc[a] * xc[a];
    }
    const double xr = std::sqrt(xr2);
    for (std::size_t k = 0; k < total; ++k) {
      if (rho[k] == 0.0 || i == k) continue;
      g.decode(k, iy);
      double yr2 = 0.0, yc[3] = {0.0, 0.0, 0.0};
      for (int a = 0; a < n; ++a) {
        yc[a] = (iy[a] - N / 2) * h;
        yr2 += yc[a] * yc[a];
      }
      const double yr = std::sqrt(yr2);
      // Minimal-image displacement, matching the periodic kernel sampling;
      // the unit radial weights vanish at the origin cell.
      double d[3] = {0.0, 0.0, 0.0}, d2 = 0.0;
      bool nyquist = false;
      for (int a = 0; a < n; ++a) {
        int m = ((ix[a] - iy[a]) % N + N) % N;
        if (m == N / 2) nyquist = true;
        const int sm = m < N / 2 ? m : m - N;
        d[a] = sm * h;
        d2 += d[a] * d[a];
      }
      if (nyquist || d2 == 0.0) continue;
      const double r = std::sqrt(d2);
      double dot = 0.0;
      for (int a = 0; a < n; ++a) {
        const double xh = xr > 0.0 ? xc[a] / xr : 0.0;
        const double yh = yr > 0.0 ? yc[a] / yr : 0.0;
        dot += (xh - yh) * d[a];
      }
      sum += rho[i] * rho[k] * dot / r * pot.radial_deriv(r);
    }
  }
  const double h2n = g.cell_volume() * g.cell_volume();
  return -0.5 * h2n * sum;
}

double integrate_1d(const std::function<double(double)>& f, double lo, double hi, int panels) {
  double sum = 0.0;
  const double dr = (hi - lo) / panels;
  for (int i = 0; i < panels; ++i) sum += f(lo + (i + 0.5) * dr);
  return sum * dr;
}

}  // namespace oracle
