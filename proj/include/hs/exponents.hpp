// Lebesgue/Sobolev exponent bookkeeping for dispersive estimates.
#pragma once

#include <limits>

namespace hs {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Exponent record for L^r in dimension n: the dispersive decay rate
// delta(r) = n/2 - n/r, the Hoelder conjugate, and (for n >= 3) the
// Sobolev-critical exponent 2* = 2n/(n-2).
struct SobolevExponents {
  int n = 0;
  double r = 2.0;
  double delta = 0.0;      // n/2 - n/r
  double conjugate = 2.0;  // 1/r + 1/conjugate = 1
};

SobolevExponents exponents(int n, double r);

double delta_exponent(int n, double r);
double conjugate_exponent(double r);
double two_star(int n);  // only for n >= 3

// A pair (q, r) is admissible when 0 <= 2/q = delta(r) < 1.
bool admissible_pair(int n, double q, double r, double tol = 1e-12);

}  // namespace hs
