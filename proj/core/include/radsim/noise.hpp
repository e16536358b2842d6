#pragma once

#include <cstdint>
#include <span>

#include "radsim/types.hpp"

namespace radsim {

/// SplitMix64 mix of (base, stream). Used to derive independent, reproducible
/// seeds for frames and noise streams from one user seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept;

/// Adds i.i.d. circular complex Gaussian samples with E|n|^2 = variance.
void add_complex_noise(std::span<Complex> data, double variance, std::uint64_t seed);

/// Well-known stream ids passed to derive_seed.
enum class NoiseStream : std::uint64_t { Signal = 1, Tensor = 2, ScenePhase = 3 };

}  // namespace radsim
