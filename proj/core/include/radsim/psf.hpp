#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "radsim/config.hpp"
#include "radsim/tensor.hpp"
#include "radsim/types.hpp"

namespace radsim {

enum class PsfSource : std::uint8_t { Analytic = 0, Measured = 1 };

/// Point-spread kernel over a centered window. Window cell (i, j, l) is the
/// response at shift (i - center.range, j - center.doppler, l - center.azimuth)
/// from the scatterer cell. Each window extent is odd, or equal to the grid extent.
struct Psf {
  Dims window{};
  std::vector<Complex> cells;
  CellIndex center{};
  double retained_energy_fraction = 1.0;
  PsfSource source = PsfSource::Analytic;

  std::size_t index(std::size_t r, std::size_t d, std::size_t a) const noexcept {
    return (r * window.doppler + d) * window.azimuth + a;
  }
  const Complex& operator()(std::size_t r, std::size_t d, std::size_t a) const noexcept {
    return cells[index(r, d, a)];
  }
  Complex& operator()(std::size_t r, std::size_t d, std::size_t a) noexcept {
    return cells[index(r, d, a)];
  }
  const Complex& center_value() const noexcept {
    return (*this)(center.range, center.doppler, center.azimuth);
  }
  std::size_t cell_count() const noexcept { return window.count(); }
  double energy() const noexcept;
};

struct CalibrationBundle {
  Psf psf;
  double noise_variance = 0.0;
  std::size_t frames_averaged = 1;
};

/// 1D response on integer bins 0..n-1 of a unit tone at fractional bin `offset`
/// after the tapered unitary DFT: (1/sqrt n) sum_t w[t] exp(j2pi t (k - offset)/n).
std::vector<Complex> axis_response(Taper taper, std::size_t n, double offset);

/// Full-grid PSF of a unit on-grid scatterer, centered at (n/2) on every axis.
Psf analytic_psf(const RadarConfig& cfg);

/// Full -3 dB main-lobe width, in bins, of the continuous axis response.
double lobe_width_3db(Taper taper, std::size_t n);

enum class TruncationMode { Energy, NoiseFloor };

struct TruncationOptions {
  TruncationMode mode = TruncationMode::Energy;
  double energy_fraction = 0.99;
  /// NoiseFloor mode: cells with |x| >= this magnitude must lie inside the window.
  double floor_magnitude = 0.0;
};

/// Smallest centered window reaching the target. In Energy mode the box grows
/// greedily one axis at a time, always along the axis whose expansion adds the
/// most energy. `full` must cover the whole grid.
Psf truncate_psf(const Psf& full, const TruncationOptions& options);
Psf truncate_psf(const Psf& full, double energy_fraction);

/// Fraction of `full`'s energy that lies inside `window`'s footprint, by direct summation.
double retained_fraction(const Psf& full, const Psf& window);

struct MeasureOptions {
  TruncationOptions truncation{};
  /// Average magnitudes instead of complex values (phase-incoherent recordings).
  bool magnitude_average = false;
  /// Minimum peak / median magnitude ratio of the averaged tensor.
  double min_peak_to_median = 10.0;
  /// Energy-mode targets count only cells whose power exceeds this multiple of the
  /// residual noise power of the average (estimated automatically). 0 disables.
  double noise_gate = 16.0;
};

/// Averages frames of a single stationary scatterer, centers the window on the
/// magnitude peak, truncates, and normalizes the peak to 1+0j. NoiseFloor
/// thresholds are in normalized units (peak magnitude 1).
Psf measure_psf(std::span<const RadarTensor> frames, const RadarConfig& cfg,
                const MeasureOptions& options = {});

/// Half-open cell ranges.
struct CellRegion {
  std::size_t range_begin = 0, range_end = 0;
  std::size_t doppler_begin = 0, doppler_end = 0;
  std::size_t azimuth_begin = 0, azimuth_end = 0;

  std::size_t count() const noexcept {
    auto span = [](std::size_t b, std::size_t e) { return e > b ? e - b : 0; };
    return span(range_begin, range_end) * span(doppler_begin, doppler_end) *
           span(azimuth_begin, azimuth_end);
  }
};

/// Mean |cell|^2 over `region`. With no region, uses the lowest-energy quarter of
/// all cells and removes the selection bias assuming circular Gaussian noise.
double estimate_noise_variance(const RadarTensor& frame,
                               const std::optional<CellRegion>& region = std::nullopt);

/// Scales `psf` so its center matches the conventional pipeline's response to a
/// unit on-grid scatterer.
Psf calibrate_psf_gain(const Psf& psf, const RadarConfig& cfg);

}  // namespace radsim
