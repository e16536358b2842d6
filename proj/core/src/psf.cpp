#include "radsim/psf.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "radsim/conventional.hpp"
#include "radsim/errors.hpp"
#include "radsim/grid.hpp"
#include "radsim/taper.hpp"

namespace radsim {

double Psf::energy() const noexcept {
  double e = 0.0;
  for (const auto& c : cells) e += std::norm(c);
  return e;
}

std::vector<Complex> axis_response(Taper taper, std::size_t n, double offset) {
  const auto w = taper_weights(taper, n);
  const double dn = double(n);
  const double scale = 1.0 / std::sqrt(dn);
  std::vector<Complex> h(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc{};
    const double delta = double(k) - offset;
    for (std::size_t t = 0; t < n; ++t) {
      const double cycles = std::fmod(double(t) * delta, dn) / dn;
      acc += w[t] * std::polar(1.0, 2.0 * std::numbers::pi * cycles);
    }
    h[k] = acc * scale;
  }
  return h;
}

Psf analytic_psf(const RadarConfig& cfg) {
  validate(cfg);
  const Dims dims = cfg.dims();
  const auto hr = axis_response(cfg.range_window, dims.range, 0.0);
  const auto hd = axis_response(cfg.doppler_window, dims.doppler, 0.0);
  const auto ha = axis_response(cfg.azimuth_window, dims.azimuth, 0.0);

  Psf psf;
  psf.window = dims;
  psf.center = {dims.range / 2, dims.doppler / 2, dims.azimuth / 2};
  psf.cells.resize(dims.count());
  psf.retained_energy_fraction = 1.0;
  psf.source = PsfSource::Analytic;
  auto shifted = [](std::size_t i, std::size_t c, std::size_t n) { return (i + n - c) % n; };
  for (std::size_t i = 0; i < dims.range; ++i)
    for (std::size_t j = 0; j < dims.doppler; ++j)
      for (std::size_t l = 0; l < dims.azimuth; ++l)
        psf(i, j, l) = hr[shifted(i, psf.center.range, dims.range)] *
                       hd[shifted(j, psf.center.doppler, dims.doppler)] *
                       ha[shifted(l, psf.center.azimuth, dims.azimuth)];
  return psf;
}

double lobe_width_3db(Taper taper, std::size_t n) {
  const auto w = taper_weights(taper, n);
  auto power = [&](double f) {
    Complex acc{};
    for (std::size_t t = 0; t < n; ++t)
      acc += w[t] * std::polar(1.0, 2.0 * std::numbers::pi * double(t) * f / double(n));
    return std::norm(acc);
  };
  const double p0 = power(0.0);
  const double half = 0.5 * p0;
  constexpr double kStep = 0.01;
  double lo = 0.0;
  double hi = kStep;
  while (hi <= double(n) / 2 && power(hi) > half) {
    lo = hi;
    hi += kStep;
  }
  if (hi > double(n) / 2) return double(n);
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (power(mid) > half ? lo : hi) = mid;
  }
  return 2.0 * 0.5 * (lo + hi);
}

namespace {

// Growth state of one axis: offsets [-half, half] around the center, or the whole axis.
struct AxisExtent {
  std::size_t n = 0;       // grid extent
  std::size_t center = 0;  // center index in the full PSF
  std::size_t half = 0;
  bool full = false;

  std::size_t extent() const noexcept { return full ? n : 2 * half + 1; }
  bool can_grow() const noexcept { return !full; }
  // Offsets (relative to center) covered by the current extent.
  long first() const noexcept { return full ? -long(center) : -long(half); }
  long last() const noexcept { return full ? long(n) - 1 - long(center) : long(half); }
  AxisExtent grown() const noexcept {
    AxisExtent g = *this;
    if (half + 1 <= center && half + 1 + center <= n - 1)
      ++g.half;
    else
      g.full = true;
    return g;
  }
};

std::size_t full_index(long offset, std::size_t center, std::size_t n) {
  const long v = (offset + long(center)) % long(n);
  return std::size_t(v < 0 ? v + long(n) : v);
}

class EnergyGrid {
 public:
  explicit EnergyGrid(const Psf& full) : dims_(full.window), e_(full.cells.size()) {
    for (std::size_t i = 0; i < e_.size(); ++i) e_[i] = std::norm(full.cells[i]);
  }
  EnergyGrid(const Dims& dims, std::vector<double> energies)
      : dims_(dims), e_(std::move(energies)) {}

  double total() const noexcept {
    double s = 0.0;
    for (double v : e_) s += v;
    return s;
  }

  // Energy in the box spanned by per-axis offset ranges [lo, hi].
  double box(const std::array<long, 3>& lo, const std::array<long, 3>& hi,
             const std::array<std::size_t, 3>& center) const {
    double s = 0.0;
    for (long r = lo[0]; r <= hi[0]; ++r) {
      const std::size_t ri = full_index(r, center[0], dims_.range);
      for (long d = lo[1]; d <= hi[1]; ++d) {
        const std::size_t di = full_index(d, center[1], dims_.doppler);
        const double* row = &e_[(ri * dims_.doppler + di) * dims_.azimuth];
        for (long a = lo[2]; a <= hi[2]; ++a) s += row[full_index(a, center[2], dims_.azimuth)];
      }
    }
    return s;
  }

 private:
  Dims dims_;
  std::vector<double> e_;
};

// Energy added by growing axis `axis` from `ext` to `next`.
double growth_gain(const EnergyGrid& grid, const std::array<AxisExtent, 3>& ext, std::size_t axis,
                   const AxisExtent& next) {
  std::array<long, 3> lo{}, hi{};
  std::array<std::size_t, 3> center{};
  for (std::size_t k = 0; k < 3; ++k) {
    lo[k] = ext[k].first();
    hi[k] = ext[k].last();
    center[k] = ext[k].center;
  }
  double gain = 0.0;
  auto slab = [&](long a, long b) {
    if (a > b) return;
    auto l = lo, h = hi;
    l[axis] = a;
    h[axis] = b;
    gain += grid.box(l, h, center);
  };
  slab(next.first(), ext[axis].first() - 1);
  slab(ext[axis].last() + 1, next.last());
  return gain;
}

Psf extract_window(const Psf& full, const std::array<AxisExtent, 3>& ext) {
  Psf out;
  out.window = {ext[0].extent(), ext[1].extent(), ext[2].extent()};
  out.center = {std::size_t(-ext[0].first()), std::size_t(-ext[1].first()),
                std::size_t(-ext[2].first())};
  out.source = full.source;
  out.cells.resize(out.window.count());
  for (std::size_t i = 0; i < out.window.range; ++i) {
    const std::size_t fi = full_index(long(i) + ext[0].first(), full.center.range, full.window.range);
    for (std::size_t j = 0; j < out.window.doppler; ++j) {
      const std::size_t fj =
          full_index(long(j) + ext[1].first(), full.center.doppler, full.window.doppler);
      for (std::size_t l = 0; l < out.window.azimuth; ++l) {
        const std::size_t fl =
            full_index(long(l) + ext[2].first(), full.center.azimuth, full.window.azimuth);
        out(i, j, l) = full(fi, fj, fl);
      }
    }
  }
  out.retained_energy_fraction = retained_fraction(full, out);
  return out;
}

std::array<AxisExtent, 3> initial_extents(const Psf& full) {
  std::array<AxisExtent, 3> ext;
  for (std::size_t k = 0; k < 3; ++k) {
    ext[k].n = full.window[k];
    ext[k].center = full.center[k];
    ext[k].half = 0;
    ext[k].full = ext[k].n == 1;
  }
  return ext;
}

Psf truncate_by_energy(const Psf& full, const EnergyGrid& grid, double fraction) {
  const double total = grid.total();
  if (!(total > 0)) throw CalibrationError("cannot truncate a PSF with zero energy");
  auto ext = initial_extents(full);
  if (fraction >= 1.0) {
    for (auto& e : ext) e.full = true;
    return extract_window(full, ext);
  }
  const double target = fraction * total;
  double retained = grid.box({0, 0, 0}, {0, 0, 0},
                             {full.center.range, full.center.doppler, full.center.azimuth});
  while (retained < target) {
    std::size_t best_axis = 3;
    double best_gain = -1.0;
    AxisExtent best_next;
    for (std::size_t k = 0; k < 3; ++k) {
      if (!ext[k].can_grow()) continue;
      const AxisExtent next = ext[k].grown();
      const double gain = growth_gain(grid, ext, k, next);
      if (gain > best_gain) {
        best_gain = gain;
        best_axis = k;
        best_next = next;
      }
    }
    if (best_axis == 3) break;  // whole grid
    ext[best_axis] = best_next;
    retained += best_gain;
  }
  return extract_window(full, ext);
}

Psf truncate_by_floor(const Psf& full, double floor_magnitude) {
  auto ext = initial_extents(full);
  std::array<long, 3> reach{0, 0, 0};
  for (std::size_t i = 0; i < full.window.range; ++i)
    for (std::size_t j = 0; j < full.window.doppler; ++j)
      for (std::size_t l = 0; l < full.window.azimuth; ++l) {
        if (std::abs(full(i, j, l)) < floor_magnitude) continue;
        const std::array<std::size_t, 3> idx{i, j, l};
        for (std::size_t k = 0; k < 3; ++k)
          reach[k] = std::max(reach[k], std::abs(long(idx[k]) - long(full.center[k])));
      }
  for (std::size_t k = 0; k < 3; ++k) {
    while (!ext[k].full && long(ext[k].half) < reach[k]) ext[k] = ext[k].grown();
  }
  return extract_window(full, ext);
}

void require_full(const Psf& full) {
  if (full.cells.size() != full.window.count())
    throw ValidationError("psf", "cell count does not match window");
  for (std::size_t k = 0; k < 3; ++k)
    if (full.center[k] >= full.window[k]) throw ValidationError("psf", "center outside window");
}

}  // namespace

Psf truncate_psf(const Psf& full, const TruncationOptions& options) {
  require_full(full);
  if (options.mode == TruncationMode::Energy) {
    if (!(options.energy_fraction > 0.0 && options.energy_fraction <= 1.0))
      throw ValidationError("energy_fraction", "must lie in (0, 1]");
    return truncate_by_energy(full, EnergyGrid(full), options.energy_fraction);
  }
  if (!(full.energy() > 0)) throw CalibrationError("cannot truncate a PSF with zero energy");
  if (!(options.floor_magnitude >= 0)) throw ValidationError("floor_magnitude", "must be >= 0");
  return truncate_by_floor(full, options.floor_magnitude);
}

Psf truncate_psf(const Psf& full, double energy_fraction) {
  return truncate_psf(full, TruncationOptions{TruncationMode::Energy, energy_fraction, 0.0});
}

double retained_fraction(const Psf& full, const Psf& window) {
  const double total = full.energy();
  if (!(total > 0)) return 0.0;
  double kept = 0.0;
  for (std::size_t i = 0; i < window.window.range; ++i) {
    const std::size_t fi =
        full_index(long(i) - long(window.center.range), full.center.range, full.window.range);
    for (std::size_t j = 0; j < window.window.doppler; ++j) {
      const std::size_t fj = full_index(long(j) - long(window.center.doppler),
                                        full.center.doppler, full.window.doppler);
      for (std::size_t l = 0; l < window.window.azimuth; ++l) {
        const std::size_t fl = full_index(long(l) - long(window.center.azimuth),
                                          full.center.azimuth, full.window.azimuth);
        kept += std::norm(full(fi, fj, fl));
      }
    }
  }
  return kept / total;
}

Psf measure_psf(std::span<const RadarTensor> frames, const RadarConfig& cfg,
                const MeasureOptions& options) {
  if (frames.empty()) throw CalibrationError("measure_psf needs at least one frame");
  const Dims dims = cfg.dims();
  for (const auto& f : frames) {
    if (f.dims() != dims) throw ValidationError("dims", "frame does not match config");
    if (f.kind() != TensorKind::Filtered)
      throw ValidationError("kind", "measure_psf expects filtered tensors");
  }

  // Ordered reduction keeps the average bit-stable.
  std::vector<Complex> avg(dims.count(), Complex{});
  for (const auto& f : frames) {
    auto cells = f.cells();
    if (options.magnitude_average)
      for (std::size_t i = 0; i < avg.size(); ++i) avg[i] += std::abs(cells[i]);
    else
      for (std::size_t i = 0; i < avg.size(); ++i) avg[i] += cells[i];
  }
  const double inv = 1.0 / double(frames.size());
  for (auto& c : avg) c *= inv;

  RadarTensor averaged(dims, TensorKind::Filtered, avg);
  const CellIndex peak = argmax_magnitude(averaged);
  const Complex peak_value = averaged.at(peak);

  std::vector<double> mags(avg.size());
  for (std::size_t i = 0; i < avg.size(); ++i) mags[i] = std::abs(avg[i]);
  auto mid = mags.begin() + std::ptrdiff_t(mags.size() / 2);
  std::nth_element(mags.begin(), mid, mags.end());
  const double median = *mid;
  const double peak_mag = std::abs(peak_value);
  if (!(peak_mag > 0) || (median > 0 && peak_mag / median < options.min_peak_to_median)) {
    char msg[128];
    std::snprintf(msg, sizeof msg, "no distinct peak: peak/median magnitude ratio %.3g < %g",
                  median > 0 ? peak_mag / median : 0.0, options.min_peak_to_median);
    throw CalibrationError(msg);
  }

  // Residual noise of the average; cells below the gate do not count toward the
  // energy target.
  const double residual_noise = estimate_noise_variance(averaged);
  const double gate = options.noise_gate * residual_noise;

  Psf full;
  full.window = dims;
  full.center = {dims.range / 2, dims.doppler / 2, dims.azimuth / 2};
  full.source = PsfSource::Measured;
  full.cells.resize(dims.count());
  std::vector<double> gated(dims.count());
  const Complex norm = 1.0 / peak_value;
  for (std::size_t i = 0; i < dims.range; ++i)
    for (std::size_t j = 0; j < dims.doppler; ++j)
      for (std::size_t l = 0; l < dims.azimuth; ++l) {
        const std::size_t si = (peak.range + i + dims.range - full.center.range) % dims.range;
        const std::size_t sj =
            (peak.doppler + j + dims.doppler - full.center.doppler) % dims.doppler;
        const std::size_t sl =
            (peak.azimuth + l + dims.azimuth - full.center.azimuth) % dims.azimuth;
        const Complex v = averaged(si, sj, sl);
        full(i, j, l) = v * norm;
        const double e = std::norm(v);
        gated[full.index(i, j, l)] = e >= gate ? e * std::norm(norm) : 0.0;
      }

  Psf out;
  if (options.truncation.mode == TruncationMode::Energy) {
    const double fraction = options.truncation.energy_fraction;
    if (!(fraction > 0.0 && fraction <= 1.0))
      throw ValidationError("energy_fraction", "must lie in (0, 1]");
    const EnergyGrid grid(dims, gated);
    out = truncate_by_energy(full, grid, fraction);
    // Report the fraction of the gated (signal) energy, which is what the target was met on.
    std::array<long, 3> lo{}, hi{};
    for (std::size_t k = 0; k < 3; ++k) {
      lo[k] = -long(out.center[k]);
      hi[k] = long(out.window[k]) - 1 - long(out.center[k]);
    }
    const double total = grid.total();
    if (total > 0)
      out.retained_energy_fraction =
          grid.box(lo, hi, {full.center.range, full.center.doppler, full.center.azimuth}) / total;
  } else {
    out = truncate_psf(full, options.truncation);
  }
  out.source = PsfSource::Measured;
  return out;
}

double estimate_noise_variance(const RadarTensor& frame, const std::optional<CellRegion>& region) {
  const Dims& d = frame.dims();
  if (region) {
    const CellRegion& r = *region;
    if (r.count() == 0) throw ValidationError("region", "empty noise region");
    if (r.range_end > d.range || r.doppler_end > d.doppler || r.azimuth_end > d.azimuth)
      throw ValidationError("region", "noise region exceeds the tensor");
    double s = 0.0;
    for (std::size_t i = r.range_begin; i < r.range_end; ++i)
      for (std::size_t j = r.doppler_begin; j < r.doppler_end; ++j)
        for (std::size_t l = r.azimuth_begin; l < r.azimuth_end; ++l) s += std::norm(frame(i, j, l));
    return s / double(r.count());
  }

  // Lowest quarter of |z|^2. For circular Gaussian noise |z|^2/sigma^2 ~ Exp(1);
  // the mean of its lowest p-quantile is (1 - (1+q) e^-q) / p with q = -ln(1-p).
  constexpr double p = 0.25;
  auto cells = frame.cells();
  const std::size_t k = static_cast<std::size_t>(double(cells.size()) * p);
  if (k == 0) throw ValidationError("region", "tensor too small for automatic noise region");
  std::vector<double> power(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) power[i] = std::norm(cells[i]);
  std::nth_element(power.begin(), power.begin() + std::ptrdiff_t(k - 1), power.end());
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += power[i];
  const double q = -std::log1p(-p);
  const double lower_mean = (1.0 - (1.0 + q) * std::exp(-q)) / p;
  return s / double(k) / lower_mean;
}

Psf calibrate_psf_gain(const Psf& psf, const RadarConfig& cfg) {
  const ReflectionPoint unit = point_at_cell({0, 0, 0}, cfg, Complex{1.0, 0.0});
  const RadarTensor reference = simulate_conventional(std::span(&unit, 1), cfg, false);
  const Complex center = psf.center_value();
  if (std::abs(center) == 0) throw CalibrationError("PSF center is zero");
  Psf out = psf;
  const Complex gain = reference(0, 0, 0) / center;
  for (auto& c : out.cells) c *= gain;
  return out;
}

}  // namespace radsim
