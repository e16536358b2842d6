#include "radsim/grid.hpp"

#include <cmath>
#include <numbers>

#include "radsim/errors.hpp"

namespace radsim {

namespace {

constexpr double kSnapTolerance = 1e-9;

double snap(double x) noexcept {
  const double r = std::round(x);
  return std::abs(x - r) < kSnapTolerance ? r : x;
}

}  // namespace

double wrap_bin(double x, std::size_t n) noexcept {
  const double dn = double(n);
  double w = x - dn * std::floor(x / dn);
  w = snap(w);
  if (w >= dn) w -= dn;
  if (w < 0) w = 0;
  return w;
}

double signed_bin(double k, std::size_t n) noexcept {
  return k < double(n) / 2.0 ? k : k - double(n);
}

void validate_point(const ReflectionPoint& p, const RadarConfig& cfg) {
  if (!std::isfinite(p.range_m) || p.range_m < 0 || p.range_m >= cfg.unambiguous_range())
    throw ValidationError("range_m", "must lie in [0, " + std::to_string(cfg.unambiguous_range()) +
                                         ") m, got " + std::to_string(p.range_m));
  const double vmax = cfg.max_unambiguous_velocity();
  if (!std::isfinite(p.radial_velocity_mps) || p.radial_velocity_mps < -vmax ||
      p.radial_velocity_mps >= vmax)
    throw ValidationError("radial_velocity_mps", "must lie in [-" + std::to_string(vmax) + ", " +
                                                     std::to_string(vmax) + ") m/s, got " +
                                                     std::to_string(p.radial_velocity_mps));
  if (!std::isfinite(p.azimuth_rad) || std::abs(p.azimuth_rad) >= std::numbers::pi / 2)
    throw ValidationError("azimuth_rad", "must lie in (-pi/2, pi/2), got " +
                                             std::to_string(p.azimuth_rad));
  if (!std::isfinite(p.amplitude.real()) || !std::isfinite(p.amplitude.imag()))
    throw ValidationError("amplitude", "must be finite");
}

GridPoint map_point_to_grid(const ReflectionPoint& p, const RadarConfig& cfg) {
  validate_point(p, cfg);
  GridPoint g;
  g.k_range = wrap_bin(p.range_m / cfg.range_resolution, cfg.n_range);
  const double doppler_hz = 2.0 * p.radial_velocity_mps / cfg.carrier_wavelength;
  g.k_doppler =
      wrap_bin(doppler_hz * double(cfg.n_doppler) * cfg.pulse_repetition_interval, cfg.n_doppler);
  g.k_azimuth = wrap_bin(double(cfg.n_azimuth) / 2.0 * std::sin(p.azimuth_rad), cfg.n_azimuth);
  g.amplitude = p.amplitude;
  return g;
}

ReflectionPoint point_at_cell(const CellIndex& cell, const RadarConfig& cfg, Complex amplitude) {
  if (cell.range >= cfg.n_range || cell.doppler >= cfg.n_doppler || cell.azimuth >= cfg.n_azimuth)
    throw ValidationError("cell", "outside the grid");
  if (2 * cell.azimuth == cfg.n_azimuth)
    throw ValidationError("cell", "azimuth bin n/2 maps to endfire and is not representable");
  ReflectionPoint p;
  p.range_m = double(cell.range) * cfg.range_resolution;
  const double kd = signed_bin(double(cell.doppler), cfg.n_doppler);
  p.radial_velocity_mps =
      kd * cfg.carrier_wavelength / (2.0 * double(cfg.n_doppler) * cfg.pulse_repetition_interval);
  const double ka = signed_bin(double(cell.azimuth), cfg.n_azimuth);
  p.azimuth_rad = std::asin(2.0 * ka / double(cfg.n_azimuth));
  p.amplitude = amplitude;
  return p;
}

CellIndex nearest_cell(const GridPoint& g, const RadarConfig& cfg) noexcept {
  auto round_wrap = [](double k, std::size_t n) {
    auto i = static_cast<long long>(std::llround(k)) % static_cast<long long>(n);
    if (i < 0) i += static_cast<long long>(n);
    return static_cast<std::size_t>(i);
  };
  return {round_wrap(g.k_range, cfg.n_range), round_wrap(g.k_doppler, cfg.n_doppler),
          round_wrap(g.k_azimuth, cfg.n_azimuth)};
}

ReflectionPoint snap_to_grid(const ReflectionPoint& p, const RadarConfig& cfg) {
  CellIndex c = nearest_cell(map_point_to_grid(p, cfg), cfg);
  // The endfire azimuth bin has no physical point; step one bin back toward broadside.
  if (2 * c.azimuth == cfg.n_azimuth) c.azimuth = p.azimuth_rad >= 0 ? c.azimuth - 1 : c.azimuth + 1;
  return point_at_cell(c, cfg, p.amplitude);
}

}  // namespace radsim
