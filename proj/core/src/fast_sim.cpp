#include "radsim/fast_sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <thread>
#include <vector>

#include "radsim/conventional.hpp"
#include "radsim/errors.hpp"
#include "radsim/noise.hpp"

namespace radsim {

namespace {

struct Contribution {
  CellIndex cell;
  Complex scale;
};

void check_psf(const Psf& psf, const Dims& dims) {
  if (psf.cells.size() != psf.window.count())
    throw ValidationError("psf", "cell count does not match window");
  if (psf.window.range > dims.range || psf.window.doppler > dims.doppler ||
      psf.window.azimuth > dims.azimuth)
    throw ValidationError("psf", "PSF window larger than the grid");
  for (std::size_t k = 0; k < 3; ++k)
    if (psf.center[k] >= psf.window[k]) throw ValidationError("psf", "center outside window");
}

// Target index along one axis for every window offset.
void axis_targets(std::vector<std::size_t>& out, std::size_t cell, std::size_t center,
                  std::size_t extent, std::size_t n) {
  out.resize(extent);
  std::size_t t = (cell + n - center % n) % n;
  for (std::size_t i = 0; i < extent; ++i) {
    out[i] = t;
    if (++t == n) t = 0;
  }
}

// Adds every contribution, restricted to output range rows [row_begin, row_end).
void accumulate(RadarTensor& acc, std::span<const Contribution> contributions, const Psf& psf,
                std::size_t row_begin, std::size_t row_end) {
  const Dims& dims = acc.dims();
  std::vector<std::size_t> tr, td, ta;
  Complex* out = acc.cells().data();
  for (const auto& c : contributions) {
    if (c.scale == Complex{}) continue;
    axis_targets(tr, c.cell.range, psf.center.range, psf.window.range, dims.range);
    axis_targets(td, c.cell.doppler, psf.center.doppler, psf.window.doppler, dims.doppler);
    axis_targets(ta, c.cell.azimuth, psf.center.azimuth, psf.window.azimuth, dims.azimuth);
    for (std::size_t i = 0; i < psf.window.range; ++i) {
      if (tr[i] < row_begin || tr[i] >= row_end) continue;
      for (std::size_t j = 0; j < psf.window.doppler; ++j) {
        Complex* row = out + (tr[i] * dims.doppler + td[j]) * dims.azimuth;
        const Complex* kernel = &psf.cells[psf.index(i, j, 0)];
        for (std::size_t l = 0; l < psf.window.azimuth; ++l) row[ta[l]] += c.scale * kernel[l];
      }
    }
  }
}

void splat_contributions(std::vector<Contribution>& out, const GridPoint& g,
                         const RadarConfig& cfg) {
  const std::array<double, 3> k{g.k_range, g.k_doppler, g.k_azimuth};
  const Dims dims = cfg.dims();
  std::array<std::size_t, 3> base{};
  std::array<double, 3> frac{};
  for (std::size_t a = 0; a < 3; ++a) {
    const double f = std::floor(k[a]);
    base[a] = std::size_t(f) % dims[a];
    frac[a] = k[a] - f;
  }
  for (int corner = 0; corner < 8; ++corner) {
    double w = 1.0;
    std::array<std::size_t, 3> idx{};
    for (std::size_t a = 0; a < 3; ++a) {
      const bool upper = (corner >> a) & 1;
      w *= upper ? frac[a] : 1.0 - frac[a];
      idx[a] = upper ? (base[a] + 1) % dims[a] : base[a];
    }
    if (w == 0.0) continue;
    out.push_back({{idx[0], idx[1], idx[2]}, w * g.amplitude});
  }
}

}  // namespace

void superpose_shifted_psf(RadarTensor& acc, const CellIndex& cell, Complex scale,
                           const Psf& psf) {
  check_psf(psf, acc.dims());
  const Contribution c{{cell.range % acc.dims().range, cell.doppler % acc.dims().doppler,
                        cell.azimuth % acc.dims().azimuth},
                       scale};
  accumulate(acc, std::span(&c, 1), psf, 0, acc.dims().range);
}

RadarTensor simulate_fast(std::span<const ReflectionPoint> points, const Psf& psf,
                          const RadarConfig& cfg, const FastSimOptions& options) {
  validate(cfg);
  const Dims dims = cfg.dims();
  check_psf(psf, dims);

  std::vector<Contribution> contributions;
  contributions.reserve(points.size() * (options.placement == Placement::Splat ? 8 : 1));
  for (const auto& p : points) {
    const GridPoint g = map_point_to_grid(p, cfg);
    if (options.placement == Placement::Nearest)
      contributions.push_back({nearest_cell(g, cfg), g.amplitude});
    else
      splat_contributions(contributions, g, cfg);
  }

  RadarTensor acc(dims, TensorKind::Filtered);
  const std::size_t workers =
      std::clamp<std::size_t>(options.workers, 1, std::max<std::size_t>(1, dims.range));
  if (workers == 1) {
    accumulate(acc, contributions, psf, 0, dims.range);
  } else {
    // Each worker owns a band of output rows, so every cell sees the contributions
    // in the same order regardless of the worker count.
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = dims.range * w / workers;
      const std::size_t end = dims.range * (w + 1) / workers;
      pool.emplace_back([&, begin, end] { accumulate(acc, contributions, psf, begin, end); });
    }
  }

  if (options.add_noise && cfg.noise_variance > 0)
    add_complex_noise(acc.cells(), cfg.noise_variance,
                      derive_seed(cfg.rng_seed, std::uint64_t(NoiseStream::Tensor)));
  return acc;
}

EquivalenceReport equivalence_report(std::span<const ReflectionPoint> points,
                                     const RadarConfig& cfg, double energy_fraction) {
  std::vector<ReflectionPoint> snapped;
  snapped.reserve(points.size());
  for (const auto& p : points) snapped.push_back(snap_to_grid(p, cfg));

  const RadarTensor reference = simulate_conventional(snapped, cfg, false);
  const Psf full = analytic_psf(cfg);
  const Psf truncated = truncate_psf(full, energy_fraction);
  const RadarTensor fast_full = simulate_fast(snapped, full, cfg);
  const RadarTensor fast_truncated = simulate_fast(snapped, truncated, cfg);

  EquivalenceReport r;
  r.full_error = relative_frobenius_distance(fast_full, reference);
  r.truncated_error = relative_frobenius_distance(fast_truncated, reference);
  r.max_deviation_truncated = max_abs_deviation(fast_truncated, reference);
  r.noise_sigma = std::sqrt(cfg.noise_variance);
  r.retained_energy_fraction = truncated.retained_energy_fraction;
  r.truncated_window = truncated.window;
  r.n_points = snapped.size();
  return r;
}

}  // namespace radsim
