// Cached FFTW transforms for fields on a GridSpec.
#pragma once

#include "hs/grid.hpp"

namespace hs {

// In-place complex DFTs. Plans are created once per (dim, N, direction) with
// deterministic planning (FFTW_ESTIMATE) so repeated runs are bit-identical;
// execution is safe from concurrent threads on distinct buffers.
namespace fft {

void forward(const GridSpec& g, cplx* data);   // unnormalized DFT
void inverse(const GridSpec& g, cplx* data);   // includes the 1/N^n factor

std::vector<cplx> forward_copy(const GridSpec& g, const std::vector<cplx>& v);
std::vector<cplx> inverse_copy(const GridSpec& g, const std::vector<cplx>& v);

}  // namespace fft

// Spectral derivative along each axis: multiplies coefficients by i*k with
// the Nyquist coefficient zeroed, which keeps gradients of real fields real.
std::vector<Field> spectral_gradient(const Field& f);

// L2 norm of the spectral gradient (same Nyquist convention), via Parseval.
double gradient_l2_norm(const Field& f);

}  // namespace hs
