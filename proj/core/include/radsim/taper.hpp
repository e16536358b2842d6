#pragma once

#include <vector>

#include "radsim/config.hpp"

namespace radsim {

/// Periodic (DFT-even) taper weights of length n.
std::vector<double> taper_weights(Taper taper, std::size_t n);

/// mean(w^2) of a taper: the factor by which it scales white-noise power.
double taper_power_gain(Taper taper, std::size_t n);

/// Product of the per-axis power gains of cfg's tapers.
double noise_power_gain(const RadarConfig& cfg);

}  // namespace radsim
