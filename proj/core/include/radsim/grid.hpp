#pragma once

#include "radsim/config.hpp"
#include "radsim/types.hpp"

namespace radsim {

/// One point scatterer in physical coordinates.
struct ReflectionPoint {
  double range_m = 0.0;
  double radial_velocity_mps = 0.0;  // positive = receding
  double azimuth_rad = 0.0;
  Complex amplitude{1.0, 0.0};
};

/// A scatterer mapped onto fractional (periodic) bin coordinates.
struct GridPoint {
  double k_range = 0.0;
  double k_doppler = 0.0;
  double k_azimuth = 0.0;
  Complex amplitude{};
};

/// Throws ValidationError if `p` is not representable in one unambiguous interval of `cfg`.
void validate_point(const ReflectionPoint& p, const RadarConfig& cfg);

GridPoint map_point_to_grid(const ReflectionPoint& p, const RadarConfig& cfg);

/// Reduces x into [0, n). Values within 1e-9 of an integer snap onto it.
double wrap_bin(double x, std::size_t n) noexcept;

/// Signed form of a periodic bin index: k for k < n/2, k - n otherwise.
double signed_bin(double k, std::size_t n) noexcept;

/// Physical point that lands exactly on integer cell `cell`. Azimuth bin n_azimuth/2
/// (sin = -1, endfire) is not representable and is rejected.
ReflectionPoint point_at_cell(const CellIndex& cell, const RadarConfig& cfg, Complex amplitude);

/// Nearest integer cell of a grid point, wrapped into the grid.
CellIndex nearest_cell(const GridPoint& g, const RadarConfig& cfg) noexcept;

/// Moves a point onto its nearest integer cell, keeping the amplitude.
ReflectionPoint snap_to_grid(const ReflectionPoint& p, const RadarConfig& cfg);

}  // namespace radsim
