// Interaction potentials: sampling on the grid, convolution multipliers,
// hypothesis checks (integrability split, negative part, repulsivity), and
// the angular regularization V_j.
#pragma once

#include "hs/grid.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hs {

enum class PotentialKind { zero, inverse_power, tabulated_radial };

struct PotentialSpec {
  PotentialKind kind = PotentialKind::zero;
  double strength = 0.0;  // C in C*r^{-gamma}
  double power = 0.0;     // gamma
  std::vector<std::pair<double, double>> table;  // (radius, value), sorted
  double truncate_inner = 0.0;                   // V = 0 for r < truncate_inner
  double truncate_outer = 0.0;                   // V = 0 for r > truncate_outer (0 = none)

  static PotentialSpec zero_potential();
  static PotentialSpec inverse_power(double C, double gamma);
  static PotentialSpec tabulated(std::vector<std::pair<double, double>> samples);

  double radial_value(double r) const;       // r > 0
  double radial_derivative(double r) const;  // dv/dr, analytic where possible
  bool is_zero() const { return kind == PotentialKind::zero; }
};

struct PotentialOnGrid {
  GridSpec grid;
  PotentialSpec spec;
  int mollify_j = 0;  // > 0 when produced by regularize()
  std::vector<double> samples;  // physical layout, even under x -> -x
  std::vector<cplx> multiplier; // h^n * DFT of the displacement-layout samples
  double origin_cell_value = 0.0;
  // Radial profile evaluator consistent with the samples (mollified when
  // mollify_j > 0); valid for r > 0.
  std::function<double(double)> radial;
  std::function<double(double)> radial_deriv;

  bool is_zero() const { return spec.is_zero() && mollify_j == 0; }
};

// Samples the radial potential at the minimal-image periodic distance of
// every grid point. The origin cell takes the analytic cell average so the
// Riemann sum of V against smooth densities stays finite and accurate.
// Rejects gamma >= n for inverse-power kind.
PotentialOnGrid sample_potential(const PotentialSpec& spec, const GridSpec& grid);

struct ConvolveStats {
  double min_input = 0.0;       // most negative real part seen in the input
  double imag_residue = 0.0;    // max |Im| of the output relative to scale
};

// V * rho by multiplier-domain multiplication; implements the Riemann-sum
// periodic convolution h^n sum_y V(x-y) rho(y). Output is real (residual
// imaginary part measured and discarded). Signed inputs are accepted; when
// warn_signed is set a note goes to stderr for clearly negative densities.
Field convolve_density(const PotentialOnGrid& pot, const Field& rho,
                       bool warn_signed = true, ConvolveStats* stats = nullptr);

struct H1Report {
  double p1 = 0.0, p2 = 0.0, split_radius = 0.0;
  double near_norm = 0.0;  // ||V chi(|x|<=a)||_{p2} by grid quadrature
  double far_norm = 0.0;   // ||V chi(|x|>=a)||_{p1}
  bool near_finite = false;
  bool far_finite = false;
  bool window_cauchy = false;        // p2 > n/4
  bool window_wave_operator = false; // p1 <= n/2
  bool window_completeness = false;  // p1 < n/2 (strict)
  bool window_decay = false;         // p1 < n
  bool pass = false;
};

struct H2Report {
  double near_norm = 0.0;  // ||V_- chi(|x|<=a)||_{n/2}
  double far_norm = 0.0;   // ||V_- chi(|x|>=a)||_inf
  bool near_finite = false;
  bool far_finite = false;
  bool trivially_nonnegative = false;
  bool pass = false;
};

struct H3Report {
  double alpha = 0.0;
  double radius = 0.0;   // a
  bool monotone = false; // v nonincreasing on the sampled range
  double best_A = 0.0;   // inf over pairs of alpha*(v(r1)-v(r2))/(r2^a - r1^a)
  bool pass = false;
};

struct AssumptionReport {
  H1Report h1;
  H2Report h2;
  H3Report h3;
  std::string notes;
};

// Integrability split at radius a: near part measured in L^{p2}, far part in
// L^{p1}. Finiteness is decided on a refined radial quadrature (a norm is
// declared infinite when refining the resolution keeps growing it by more
// than 5%). Requires 1 <= p2 <= p1.
H1Report check_H1(const PotentialOnGrid& pot, double p1, double p2, double a);

// Negative part V_- = max(-V, 0) split into L^{n/2} near + L^inf far.
H2Report check_H2(const PotentialOnGrid& pot, double a = 1.0);

// Repulsivity: v nonincreasing, and the decrease near the origin at least a
// power law, quantified by the best constant in
//   v(r1) - v(r2) >= A/alpha * (r2^alpha - r1^alpha)  for 0 < r1 < r2 <= a.
// Requires alpha >= 2 and a > 0.
H3Report check_H3(const PotentialOnGrid& pot, double alpha, double a);

// Angular regularization: V_j(x) = integral over the unit ball of
// V(x - |x| z / j) phi(z) dz with phi the standard normalized bump. Smooth
// away from the origin, radial when V is, and contracts L^p norms by at most
// (1 - 1/j)^{-1/p}. Requires j >= 2.
PotentialOnGrid regularize(const PotentialSpec& spec, int j, const GridSpec& grid,
                           int quadrature_order = 8);

// Grid L^p norm of the sampled potential (p >= 1, inf allowed).
double potential_lp_norm(const PotentialOnGrid& pot, double p);

}  // namespace hs
