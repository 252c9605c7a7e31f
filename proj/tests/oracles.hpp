// Independent reference computations used by the tests: closed forms and
// brute-force sums that avoid the library's FFT path.
#pragma once

#include "hs/grid.hpp"
#include "hs/potential.hpp"

#include <complex>
#include <functional>
#include <vector>

namespace oracle {

// Closed-form free evolution of a Gaussian packet
//   u0 = A exp(-|x-c|^2/(2 w^2)) exp(i v.x)
// summed over the 3^n nearest periodic images so it is comparable with the
// periodized numerical solution.
struct GaussianPacket {
  double amplitude = 1.0;
  double width = 1.0;
  double center[3] = {0.0, 0.0, 0.0};
  double velocity[3] = {0.0, 0.0, 0.0};
};

std::complex<double> free_gaussian_value(const GaussianPacket& p, const hs::GridSpec& g,
                                         double t, const double x[3], int image_shells = 1);
hs::Field free_gaussian_field(const GaussianPacket& p, const hs::GridSpec& g, double t,
                              int image_shells = 1);

// ||u_num - u_ref||_sup / ||u_ref||_sup.
double sup_relative_error(const hs::Field& num, const hs::Field& ref);

// O(N^6) direct periodic convolution h^n sum_y V(x-y) rho(y) using the
// sampled kernel values (independent index arithmetic, no FFT).
std::vector<double> brute_convolve(const hs::PotentialOnGrid& pot,
                                   const std::vector<double>& rho);

// (1/2) h^{2n} sum_{x,y} rho(x) V(x-y) rho(y).
double brute_hartree(const hs::PotentialOnGrid& pot, const hs::Field& u);

// Symmetrized pair sum
//   -(1/2) h^{2n} sum_{x != y} rho(x) rho(y) (xhat - yhat).(x-y)/|x-y| v'(|x-y|)
// with displacements taken through the minimal image; every term is
// nonnegative for nonincreasing v.
double brute_morawetz_pair_sum(const hs::PotentialOnGrid& pot, const hs::Field& u);

// Midpoint quadrature of f over [lo, hi].
double integrate_1d(const std::function<double(double)>& f, double lo, double hi, int panels);

}  // namespace oracle
