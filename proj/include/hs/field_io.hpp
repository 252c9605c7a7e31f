// Binary field files: magic "HSF1", then n, N (little-endian uint64),
// L and time (little-endian float64), then N^n complex values as pairs of
// float64, row-major with the last axis fastest.
#pragma once

#include "hs/grid.hpp"

#include <string>

namespace hs {

void write_field(const Field& f, const std::string& path);
Field read_field(const std::string& path);

}  // namespace hs
