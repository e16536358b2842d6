#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "radsim/config.hpp"
#include "radsim/psf.hpp"

namespace radsim {

struct ComplexityReport {
  std::size_t n_s = 0;  // tensor cells
  std::size_t n_p = 0;  // reflection points
  std::size_t n_f = 0;  // PSF cells
  std::size_t n_r = 0;  // received samples per frame
  double theoretical_ratio = 0.0;
  double measured_conventional_s = 0.0;
  double measured_fast_s = 0.0;
  double measured_ratio = 0.0;
  std::size_t repetitions = 0;
  Dims psf_window{};
  double retained_energy_fraction = 1.0;
};

enum class BenchPsf { Analytic, Measured };

struct BenchmarkOptions {
  std::size_t n_points = 200;
  std::size_t repetitions = 5;
  double energy_fraction = 0.99;
  BenchPsf psf = BenchPsf::Measured;
  std::uint64_t scene_seed = 1;
};

/// Median of the samples (mean of the middle two for even counts).
double median(std::vector<double> samples);

/// PSF used by the benchmark. Measured: noiseless corner reflector at
/// cfg.reference_range_m, broadside, stationary, gain-calibrated. A fraction of 1
/// keeps the full grid.
Psf benchmark_psf(const RadarConfig& cfg, BenchPsf source, double energy_fraction);

/// Times both pipelines on one random scene, each in its own block: one warm-up
/// run, then the median of `repetitions` (>= 3) runs. Single-threaded.
ComplexityReport run_benchmark(const RadarConfig& cfg, const BenchmarkOptions& options);
ComplexityReport run_benchmark(const RadarConfig& cfg, const Psf& psf,
                               const BenchmarkOptions& options);

std::string complexity_to_json(const ComplexityReport& r, bool include_timings = true);

}  // namespace radsim
