#include "radsim/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include <json.hpp>

#include "radsim/conventional.hpp"
#include "radsim/errors.hpp"
#include "radsim/fast_sim.hpp"
#include "radsim/grid.hpp"

namespace radsim {

double median(std::vector<double> samples) {
  if (samples.empty()) throw ValidationError("samples", "median of an empty set");
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  return n % 2 ? samples[n / 2] : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
}

Psf benchmark_psf(const RadarConfig& cfg, BenchPsf source, double energy_fraction) {
  if (source == BenchPsf::Analytic) return truncate_psf(analytic_psf(cfg), energy_fraction);

  ReflectionPoint corner;
  corner.range_m = cfg.reference_range_m;
  corner.azimuth_rad = 0.0;
  corner.radial_velocity_mps = 0.0;
  corner.amplitude = 1.0;
  const RadarTensor frame = simulate_conventional(std::span(&corner, 1), cfg, false);
  MeasureOptions options;
  options.truncation.energy_fraction = energy_fraction;
  return calibrate_psf_gain(measure_psf(std::span(&frame, 1), cfg, options), cfg);
}

namespace {

std::vector<ReflectionPoint> random_points(const RadarConfig& cfg, std::size_t n,
                                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> range(cfg.range_resolution,
                                               cfg.unambiguous_range() - cfg.range_resolution);
  const double vmax = cfg.max_unambiguous_velocity();
  std::uniform_real_distribution<double> velocity(-0.9 * vmax, 0.9 * vmax);
  std::uniform_real_distribution<double> azimuth(-std::numbers::pi / 3, std::numbers::pi / 3);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::vector<ReflectionPoint> pts(n);
  for (auto& p : pts) {
    p.range_m = range(rng);
    p.radial_velocity_mps = velocity(rng);
    p.azimuth_rad = azimuth(rng);
    p.amplitude = std::polar(1.0, phase(rng));
  }
  return pts;
}

template <class F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

ComplexityReport run_benchmark(const RadarConfig& cfg, const BenchmarkOptions& options) {
  return run_benchmark(cfg, benchmark_psf(cfg, options.psf, options.energy_fraction), options);
}

ComplexityReport run_benchmark(const RadarConfig& cfg, const Psf& psf,
                               const BenchmarkOptions& options) {
  validate(cfg);
  if (options.repetitions < 3) throw ValidationError("repetitions", "must be >= 3");
  const auto points = random_points(cfg, options.n_points, options.scene_seed);

  double sink = 0.0;
  auto conventional = [&] { sink += simulate_conventional(points, cfg, false).cells()[0].real(); };
  auto fast = [&] { sink += simulate_fast(points, psf, cfg).cells()[0].real(); };

  // Each pipeline is timed in its own block after its own warm-up. Interleaving
  // them makes the fast path pay for re-faulting the output pages the allocator
  // released after each conventional run.
  std::vector<double> tc, tf;
  conventional();
  for (std::size_t i = 0; i < options.repetitions; ++i) tc.push_back(seconds(conventional));
  fast();
  for (std::size_t i = 0; i < options.repetitions; ++i) tf.push_back(seconds(fast));
  [[maybe_unused]] volatile double keep = sink;

  ComplexityReport r;
  r.n_s = cfg.cell_count();
  r.n_r = cfg.cell_count();
  r.n_p = points.size();
  r.n_f = psf.cell_count();
  r.theoretical_ratio = double(r.n_s) / double(r.n_f);
  r.measured_conventional_s = median(tc);
  r.measured_fast_s = median(tf);
  r.measured_ratio =
      r.measured_fast_s > 0 ? r.measured_conventional_s / r.measured_fast_s : INFINITY;
  r.repetitions = options.repetitions;
  r.psf_window = psf.window;
  r.retained_energy_fraction = psf.retained_energy_fraction;
  return r;
}

std::string complexity_to_json(const ComplexityReport& r, bool include_timings) {
  nlohmann::json doc{{"n_s", r.n_s},
                     {"n_p", r.n_p},
                     {"n_f", r.n_f},
                     {"n_r", r.n_r},
                     {"psf_window", {r.psf_window.range, r.psf_window.doppler, r.psf_window.azimuth}},
                     {"retained_energy_fraction", r.retained_energy_fraction},
                     {"theoretical_ratio", r.theoretical_ratio},
                     {"repetitions", r.repetitions}};
  if (include_timings) {
    doc["measured_conventional_s"] = r.measured_conventional_s;
    doc["measured_fast_s"] = r.measured_fast_s;
    doc["measured_ratio"] = r.measured_ratio;
  }
  return doc.dump(2) + "\n";
}

}  // namespace radsim
