#include "hs/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace hs {
namespace fft {
namespace {

struct PlanKey {
  int dim;
  int n;
  int sign;
  auto operator<=>(const PlanKey&) const = default;
};

std::mutex plan_mutex;
std::map<PlanKey, fftw_plan> plan_cache;

fftw_plan get_plan(const GridSpec& g, int sign) {
  const PlanKey key{g.dim, g.points_per_axis, sign};
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto it = plan_cache.find(key);
  if (it != plan_cache.end()) return it->second;

  int dims[3] = {g.points_per_axis, g.points_per_axis, g.points_per_axis};
  const std::size_t total = g.total_points();
  fftw_complex* scratch = fftw_alloc_complex(total);
  if (!scratch) throw std::runtime_error("fftw_alloc_complex failed");
  // FFTW_UNALIGNED lets the plan run on any caller buffer.
  fftw_plan p = fftw_plan_dft(g.dim, dims, scratch, scratch, sign,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(scratch);
  if (!p) throw std::runtime_error("fftw plan creation failed");
  plan_cache.emplace(key, p);
  return p;
}

}  // namespace

void forward(const GridSpec& g, cplx* data) {
  fftw_plan p = get_plan(g, FFTW_FORWARD);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data),
                   reinterpret_cast<fftw_complex*>(data));
}

void inverse(const GridSpec& g, cplx* data) {
  fftw_plan p = get_plan(g, FFTW_BACKWARD);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data),
                   reinterpret_cast<fftw_complex*>(data));
  const double scale = 1.0 / static_cast<double>(g.total_points());
  const std::size_t total = g.total_points();
  for (std::size_t i = 0; i < total; ++i) data[i] *= scale;
}

std::vector<cplx> forward_copy(const GridSpec& g, const std::vector<cplx>& v) {
  std::vector<cplx> out = v;
  forward(g, out.data());
  return out;
}

std::vector<cplx> inverse_copy(const GridSpec& g, const std::vector<cplx>& v) {
  std::vector<cplx> out = v;
  inverse(g, out.data());
  return out;
}

}  // namespace fft

std::vector<Field> spectral_gradient(const Field& f) {
  require_valid(f);
  const GridSpec& g = f.grid;
  std::vector<cplx> hat = fft::forward_copy(g, f.values);

  std::vector<Field> grad;
  grad.reserve(g.dim);
  const std::size_t total = g.total_points();
  for (int axis = 0; axis < g.dim; ++axis) {
    Field comp;
    comp.grid = g;
    comp.time = f.time;
    comp.values.resize(total);
    int ix[3];
    for (std::size_t i = 0; i < total; ++i) {
      g.decode(i, ix);
      const int j = ix[axis];
      const double k = g.is_nyquist(j) ? 0.0 : g.wavenumber(j);
      comp.values[i] = cplx{0.0, k} * hat[i];
    }
    fft::inverse(g, comp.values.data());
    grad.push_back(std::move(comp));
  }
  return grad;
}

double gradient_l2_norm(const Field& f) {
  require_valid(f);
  const GridSpec& g = f.grid;
  std::vector<cplx> hat = fft::forward_copy(g, f.values);
  const std::size_t total = g.total_points();
  double sum = 0.0;
  int ix[3];
  for (std::size_t i = 0; i < total; ++i) {
    g.decode(i, ix);
    double k2 = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      if (g.is_nyquist(ix[a])) continue;
      const double k = g.wavenumber(ix[a]);
      k2 += k * k;
    }
    sum += k2 * std::norm(hat[i]);
  }
  const double weight = g.cell_volume() / static_cast<double>(total);
  return std::sqrt(weight * sum);
}

}  // namespace hs
