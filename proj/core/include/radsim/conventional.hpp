#pragma once

#include <span>

#include "radsim/config.hpp"
#include "radsim/grid.hpp"
#include "radsim/tensor.hpp"

namespace radsim {

/// Raw signal r(n,m,q) = sum_i a_i exp(-j2pi (n kr_i/Nr + m kd_i/Nd + q ka_i/Na)),
/// plus white complex noise when `add_noise` (seeded from cfg.rng_seed). The raw
/// noise power is noise_variance / noise_power_gain(cfg) so the filtered tensor
/// carries noise_variance per cell.
RadarTensor synthesize_received(std::span<const ReflectionPoint> points,
                                const RadarConfig& cfg, bool add_noise);

/// Tapered, unitary 3D DFT (+j2pi analysis). A point synthesized at integer
/// bin k lands on cell k.
RadarTensor match_filter(const RadarTensor& raw, const RadarConfig& cfg);

RadarTensor simulate_conventional(std::span<const ReflectionPoint> points,
                                  const RadarConfig& cfg, bool add_noise);

}  // namespace radsim
