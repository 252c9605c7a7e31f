// Grid quadrature norms: L^r, H^1, and cube-decomposed l^m(L^r).
#pragma once

#include "hs/grid.hpp"

namespace hs {

// L^r norm by the Riemann sum with weight h^n; r = infinity gives the
// max-abs sample. Requires r >= 1.
double lp_norm(const Field& f, double r);

// ||u||_2 + ||grad u||_2 (the r = 2 Sobolev convention used everywhere).
double h1_norm(const Field& f);

double mass(const Field& f);  // ||u||_2^2

// l^m aggregation of per-cube L^r norms over the partition of the box into
// cubes of edge `edge` anchored at the box corner. The edge must be an
// integer multiple of the grid spacing; a trailing partial cube is allowed
// when the edge does not divide 2L.
double cube_norm(const Field& f, double m, double r, double edge);

}  // namespace hs
