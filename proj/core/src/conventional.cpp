#include "radsim/conventional.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "radsim/errors.hpp"
#include "radsim/fft.hpp"
#include "radsim/noise.hpp"
#include "radsim/taper.hpp"

namespace radsim {

namespace {

// exp(-j 2 pi t k / n) for t = 0..n-1, reducing t*k mod n before scaling to keep
// the phase accurate for large t.
void fill_tone(std::vector<Complex>& out, double k, std::size_t n) {
  out.resize(n);
  const double dn = double(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double cycles = std::fmod(double(t) * k, dn) / dn;
    out[t] = std::polar(1.0, -2.0 * std::numbers::pi * cycles);
  }
}

}  // namespace

RadarTensor synthesize_received(std::span<const ReflectionPoint> points, const RadarConfig& cfg,
                                bool add_noise) {
  validate(cfg);
  const Dims dims = cfg.dims();
  RadarTensor raw(dims, TensorKind::RawSignal);

  // Per-point tones, then one pass over the tensor a range row at a time so each
  // row stays in cache while every point is added to it.
  struct Tones {
    Complex amplitude;
    std::vector<Complex> r, d, a;
  };
  std::vector<Tones> tones;
  tones.reserve(points.size());
  for (const auto& p : points) {
    const GridPoint g = map_point_to_grid(p, cfg);
    if (g.amplitude == Complex{}) continue;
    Tones t{g.amplitude, {}, {}, {}};
    fill_tone(t.r, g.k_range, dims.range);
    fill_tone(t.d, g.k_doppler, dims.doppler);
    fill_tone(t.a, g.k_azimuth, dims.azimuth);
    tones.push_back(std::move(t));
  }

  const std::size_t row = dims.doppler * dims.azimuth;
  for (std::size_t n = 0; n < dims.range; ++n) {
    Complex* const base = raw.cells().data() + n * row;
    for (const auto& t : tones) {
      const Complex an = t.amplitude * t.r[n];
      Complex* cell = base;
      for (std::size_t m = 0; m < dims.doppler; ++m) {
        const Complex anm = an * t.d[m];
        const double ar = anm.real(), ai = anm.imag();
        // Written out so the loop vectorizes (std::complex * checks for inf/nan).
        for (std::size_t q = 0; q < dims.azimuth; ++q, ++cell) {
          const double br = t.a[q].real(), bi = t.a[q].imag();
          *cell += Complex(ar * br - ai * bi, ar * bi + ai * br);
        }
      }
    }
  }

  if (add_noise && cfg.noise_variance > 0) {
    const double raw_variance = cfg.noise_variance / noise_power_gain(cfg);
    add_complex_noise(raw.cells(), raw_variance,
                      derive_seed(cfg.rng_seed, std::uint64_t(NoiseStream::Signal)));
  }
  return raw;
}

RadarTensor match_filter(const RadarTensor& raw, const RadarConfig& cfg) {
  if (raw.dims() != cfg.dims()) throw ValidationError("dims", "raw tensor does not match config");
  if (raw.kind() != TensorKind::RawSignal)
    throw ValidationError("kind", "match_filter expects a raw-signal tensor");
  const Dims dims = cfg.dims();
  RadarTensor out = raw;
  out.set_kind(TensorKind::Filtered);

  const bool tapered = cfg.range_window != Taper::Rectangular ||
                       cfg.doppler_window != Taper::Rectangular ||
                       cfg.azimuth_window != Taper::Rectangular;
  if (tapered) {
    const auto wr = taper_weights(cfg.range_window, dims.range);
    const auto wd = taper_weights(cfg.doppler_window, dims.doppler);
    const auto wa = taper_weights(cfg.azimuth_window, dims.azimuth);
    Complex* cell = out.cells().data();
    for (std::size_t n = 0; n < dims.range; ++n)
      for (std::size_t m = 0; m < dims.doppler; ++m) {
        const double wnm = wr[n] * wd[m];
        for (std::size_t q = 0; q < dims.azimuth; ++q) *cell++ *= wnm * wa[q];
      }
  }
  dft_3d(out.cells(), dims, FftSign::Positive, /*unitary=*/true);
  return out;
}

RadarTensor simulate_conventional(std::span<const ReflectionPoint> points, const RadarConfig& cfg,
                                  bool add_noise) {
  return match_filter(synthesize_received(points, cfg, add_noise), cfg);
}

}  // namespace radsim
