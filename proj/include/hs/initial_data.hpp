// Deterministic initial-data generation for experiments.
#pragma once

#include "hs/grid.hpp"

#include <cstdint>
#include <string>

namespace hs {

enum class InitialDataKind { gaussian, random_band_limited, from_file };

struct InitialDataSpec {
  InitialDataKind kind = InitialDataKind::gaussian;
  double amplitude = 1.0;
  double width = 1.0;
  double center[3] = {0.0, 0.0, 0.0};
  double velocity[3] = {0.0, 0.0, 0.0};
  std::uint64_t seed = 0;
  double band = 0.0;          // keep modes with |k| <= band
  std::string path;           // for from_file
  double normalize_l2 = 0.0;  // > 0: rescale to this L^2 norm
};

// gaussian: amplitude exp(-|x-c|^2 / (2 w^2)) exp(i v.x)
// random_band_limited: seeded complex Gaussian coefficients on |k| <= band,
//   scaled so the L^2 norm equals `amplitude`; bit-reproducible for a fixed
//   seed on any platform (own Box-Muller, no library distributions).
Field generate_initial_data(const InitialDataSpec& spec, const GridSpec& grid);

}  // namespace hs
