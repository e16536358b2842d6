#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "radsim/types.hpp"

namespace radsim {

inline constexpr double kSpeedOfLight = 299'792'458.0;

/// Amplitude taper applied along one axis of the raw signal before the match filter.
enum class Taper { Rectangular, Hann, Hamming };

std::string_view to_string(Taper taper);
Taper parse_taper(std::string_view name);

/// Parametric description of the simulated radar.
///
/// The raw signal is n_range fast-time samples x n_doppler pulses x n_azimuth
/// virtual elements of a half-wavelength uniform linear array. noise_variance is
/// the per-cell complex noise variance of the *filtered* tensor.
struct RadarConfig {
  std::size_t n_range = 0;
  std::size_t n_doppler = 0;
  std::size_t n_azimuth = 0;
  double carrier_wavelength = 0.0;         // m
  double range_resolution = 0.0;           // m per range bin
  double pulse_repetition_interval = 0.0;  // s
  double noise_variance = 0.0;
  std::uint64_t rng_seed = 0;

  Taper range_window = Taper::Rectangular;
  Taper doppler_window = Taper::Rectangular;
  Taper azimuth_window = Taper::Rectangular;
  double reference_range_m = 25.0;

  Dims dims() const noexcept { return {n_range, n_doppler, n_azimuth}; }
  std::size_t cell_count() const noexcept { return n_range * n_doppler * n_azimuth; }

  double unambiguous_range() const noexcept { return double(n_range) * range_resolution; }
  /// Velocity period of the Doppler axis: lambda / (2 PRI).
  double doppler_velocity_period() const noexcept {
    return carrier_wavelength / (2.0 * pulse_repetition_interval);
  }
  /// Velocities in [-max, +max) are unambiguous.
  double max_unambiguous_velocity() const noexcept { return 0.5 * doppler_velocity_period(); }
  /// Rayleigh beamwidth of the array, 2 / n_azimuth radians.
  double azimuth_resolution_rad() const noexcept { return 2.0 / double(n_azimuth); }

  Taper taper(std::size_t axis) const noexcept {
    return axis == 0 ? range_window : axis == 1 ? doppler_window : azimuth_window;
  }
};

/// Throws ValidationError naming the first bad field.
void validate(const RadarConfig& cfg);

/// Known presets: "raddet-ti" and "desk-small".
RadarConfig make_preset(std::string_view name);

/// Smallest element count whose Rayleigh beamwidth 2/n rad does not exceed `beamwidth_rad`.
std::size_t min_elements_for_beamwidth(double beamwidth_rad);

std::string config_to_json(const RadarConfig& cfg);
/// Fields absent from the document keep the values of `base`.
RadarConfig config_from_json(std::string_view text, const RadarConfig& base = {});
void save_config(const std::filesystem::path& path, const RadarConfig& cfg);
RadarConfig load_config(const std::filesystem::path& path, const RadarConfig& base = {});

}  // namespace radsim
