#pragma once

#include <span>

#include "radsim/types.hpp"

namespace radsim {

enum class FftSign { Negative = -1, Positive = +1 };

/// In-place 3D DFT over a row-major (range, doppler, azimuth) array,
/// X[k] = sum_n x[n] exp(sign * j 2 pi n k / N), scaled by 1/sqrt(N) when `unitary`.
///
/// Safe to call concurrently on distinct buffers.
void dft_3d(std::span<Complex> data, const Dims& dims, FftSign sign, bool unitary = true);

/// In-place 1D DFT with the same conventions.
void dft_1d(std::span<Complex> data, FftSign sign, bool unitary = true);

}  // namespace radsim
