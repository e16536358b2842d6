#pragma once

#include <cstdint>
#include <vector>

#include "radsim/config.hpp"
#include "radsim/tensor.hpp"

namespace radsim {

/// Real range x azimuth image in native bin order (azimuth bin 0 = broadside).
struct RadarImage {
  std::size_t n_range = 0;
  std::size_t n_azimuth = 0;
  std::vector<double> pixels;

  RadarImage() = default;
  RadarImage(std::size_t nr, std::size_t na, double fill = 0.0)
      : n_range(nr), n_azimuth(na), pixels(nr * na, fill) {}

  double& operator()(std::size_t r, std::size_t a) noexcept { return pixels[r * n_azimuth + a]; }
  double operator()(std::size_t r, std::size_t a) const noexcept {
    return pixels[r * n_azimuth + a];
  }
  double max_value() const noexcept;
};

/// image[r][a] = max_d |t[r][d][a]|.
RadarImage tensor_to_image(const RadarTensor& t);

/// Doppler bin achieving the max of each pixel (lowest bin on ties).
std::vector<std::size_t> doppler_argmax(const RadarTensor& t);

/// 20 log10(max(v, eps)) with eps = 10^(floor_db/20).
RadarImage to_decibels(const RadarImage& img, double floor_db);

/// Row-major raster; x spans [-R, R) left to right, y spans [0, R) bottom to top
/// (row 0 is the far edge).
struct CartesianRaster {
  std::size_t width = 0;
  std::size_t height = 0;
  double pixel_m = 0.0;
  std::vector<double> values;
  std::vector<std::uint8_t> valid;  // 0 outside the field of view

  double value_at_xy(double x_m, double y_m) const;
  bool valid_at_xy(double x_m, double y_m) const;
  std::size_t column_of(double x_m) const noexcept;
  std::size_t row_of(double y_m) const noexcept;
};

/// Nearest-neighbour resampling onto an x-y grid (x = R sin az, y = R cos az).
CartesianRaster polar_to_cartesian(const RadarImage& img, const RadarConfig& cfg,
                                   double pixel_m);

}  // namespace radsim
