#include "hs/exponents.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hs {

double delta_exponent(int n, double r) {
  if (r < 2.0) throw std::invalid_argument("delta_exponent: requires r >= 2");
  if (std::isinf(r)) return n / 2.0;
  return n / 2.0 - n / r;
}

double conjugate_exponent(double r) {
  if (r < 1.0) throw std::invalid_argument("conjugate_exponent: requires r >= 1");
  if (std::isinf(r)) return 1.0;
  if (r == 1.0) return kInfinity;
  return r / (r - 1.0);
}

double two_star(int n) {
  if (n < 3)
    throw std::invalid_argument("two_star: defined only for n >= 3, got " + std::to_string(n));
  return 2.0 * n / (n - 2.0);
}

SobolevExponents exponents(int n, double r) {
  if (n < 1) throw std::invalid_argument("exponents: requires n >= 1");
  SobolevExponents e;
  e.n = n;
  e.r = r;
  e.delta = delta_exponent(n, r);
  e.conjugate = conjugate_exponent(r);
  return e;
}

bool admissible_pair(int n, double q, double r, double tol) {
  const double d = delta_exponent(n, r);
  if (d >= 1.0) return false;
  const double two_over_q = std::isinf(q) ? 0.0 : 2.0 / q;
  return std::abs(two_over_q - d) <= tol;
}

}  // namespace hs
