// Small quadrature utilities shared by the potential machinery.
#pragma once

#include <utility>
#include <vector>

namespace hs {

// Gauss-Legendre nodes and weights on [-1, 1].
std::vector<std::pair<double, double>> gauss_legendre(int order);

}  // namespace hs
