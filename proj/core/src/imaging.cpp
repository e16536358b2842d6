#include "radsim/imaging.hpp"

#include <algorithm>
#include <cmath>

#include "radsim/errors.hpp"

namespace radsim {

double RadarImage::max_value() const noexcept {
  double m = 0.0;
  for (double v : pixels) m = std::max(m, v);
  return m;
}

RadarImage tensor_to_image(const RadarTensor& t) {
  if (t.kind() != TensorKind::Filtered)
    throw ValidationError("kind", "images are formed from filtered tensors");
  const Dims& d = t.dims();
  RadarImage img(d.range, d.azimuth);
  for (std::size_t r = 0; r < d.range; ++r)
    for (std::size_t dop = 0; dop < d.doppler; ++dop)
      for (std::size_t a = 0; a < d.azimuth; ++a) img(r, a) = std::max(img(r, a), std::abs(t(r, dop, a)));
  return img;
}

std::vector<std::size_t> doppler_argmax(const RadarTensor& t) {
  const Dims& d = t.dims();
  std::vector<std::size_t> best(d.range * d.azimuth, 0);
  std::vector<double> value(d.range * d.azimuth, -1.0);
  for (std::size_t r = 0; r < d.range; ++r)
    for (std::size_t dop = 0; dop < d.doppler; ++dop)
      for (std::size_t a = 0; a < d.azimuth; ++a) {
        const double m = std::abs(t(r, dop, a));
        const std::size_t i = r * d.azimuth + a;
        if (m > value[i]) {
          value[i] = m;
          best[i] = dop;
        }
      }
  return best;
}

RadarImage to_decibels(const RadarImage& img, double floor_db) {
  const double eps = std::pow(10.0, floor_db / 20.0);
  RadarImage out(img.n_range, img.n_azimuth);
  for (std::size_t i = 0; i < img.pixels.size(); ++i)
    out.pixels[i] = std::max(20.0 * std::log10(std::max(img.pixels[i], eps)), floor_db);
  return out;
}

std::size_t CartesianRaster::column_of(double x_m) const noexcept {
  const double half_width = double(width) * pixel_m / 2.0;
  return static_cast<std::size_t>(std::floor((x_m + half_width) / pixel_m));
}

std::size_t CartesianRaster::row_of(double y_m) const noexcept {
  const auto from_bottom = static_cast<std::size_t>(std::floor(y_m / pixel_m));
  return height - 1 - std::min(from_bottom, height - 1);
}

double CartesianRaster::value_at_xy(double x_m, double y_m) const {
  return values[row_of(y_m) * width + column_of(x_m)];
}

bool CartesianRaster::valid_at_xy(double x_m, double y_m) const {
  return valid[row_of(y_m) * width + column_of(x_m)] != 0;
}

CartesianRaster polar_to_cartesian(const RadarImage& img, const RadarConfig& cfg, double pixel_m) {
  if (!(pixel_m > 0)) throw ValidationError("pixel_m", "must be > 0");
  if (img.n_range != cfg.n_range || img.n_azimuth != cfg.n_azimuth)
    throw ValidationError("dims", "image does not match config");
  const double r_max = cfg.unambiguous_range();
  CartesianRaster out;
  out.pixel_m = pixel_m;
  out.height = static_cast<std::size_t>(std::ceil(r_max / pixel_m));
  out.width = 2 * out.height;
  out.values.assign(out.width * out.height, 0.0);
  out.valid.assign(out.width * out.height, 0);

  const double half_width = double(out.width) * pixel_m / 2.0;
  const double half_na = double(cfg.n_azimuth) / 2.0;
  for (std::size_t row = 0; row < out.height; ++row) {
    const double y = (double(out.height - 1 - row) + 0.5) * pixel_m;
    for (std::size_t col = 0; col < out.width; ++col) {
      const double x = (double(col) + 0.5) * pixel_m - half_width;
      const double range = std::hypot(x, y);
      const long rb = std::lround(range / cfg.range_resolution);
      if (rb >= long(cfg.n_range)) continue;
      const double s = x / range;  // sin(azimuth); y > 0 keeps |azimuth| < 90 deg
      long ab = std::lround(half_na * s);
      if (2 * std::abs(ab) >= long(cfg.n_azimuth)) continue;
      if (ab < 0) ab += long(cfg.n_azimuth);
      const std::size_t i = row * out.width + col;
      out.values[i] = img(std::size_t(rb), std::size_t(ab));
      out.valid[i] = 1;
    }
  }
  return out;
}

}  // namespace radsim
