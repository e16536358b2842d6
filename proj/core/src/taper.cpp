#include "radsim/taper.hpp"

#include <cmath>
#include <numbers>

namespace radsim {

std::vector<double> taper_weights(Taper taper, std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (taper == Taper::Rectangular) return w;
  const double a0 = taper == Taper::Hann ? 0.5 : 0.54;
  const double a1 = 1.0 - a0;
  for (std::size_t t = 0; t < n; ++t)
    w[t] = a0 - a1 * std::cos(2.0 * std::numbers::pi * double(t) / double(n));
  return w;
}

double taper_power_gain(Taper taper, std::size_t n) {
  const auto w = taper_weights(taper, n);
  double s = 0.0;
  for (double v : w) s += v * v;
  return s / double(n);
}

double noise_power_gain(const RadarConfig& cfg) {
  return taper_power_gain(cfg.range_window, cfg.n_range) *
         taper_power_gain(cfg.doppler_window, cfg.n_doppler) *
         taper_power_gain(cfg.azimuth_window, cfg.n_azimuth);
}

}  // namespace radsim
