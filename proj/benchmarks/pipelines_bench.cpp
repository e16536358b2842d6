#include <benchmark/benchmark.h>

#include <numbers>
#include <random>
#include <vector>

#include "radsim/bench.hpp"
#include "radsim/conventional.hpp"
#include "radsim/fast_sim.hpp"
#include "radsim/psf.hpp"

using namespace radsim;

namespace {

std::vector<ReflectionPoint> scene(const RadarConfig& cfg, std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> r(1.0, cfg.unambiguous_range() - 1.0);
  std::uniform_real_distribution<double> v(-0.9 * cfg.max_unambiguous_velocity(),
                                           0.9 * cfg.max_unambiguous_velocity());
  std::uniform_real_distribution<double> az(-1.0, 1.0);
  std::vector<ReflectionPoint> pts(n);
  for (auto& p : pts) p = {r(rng), v(rng), az(rng), 1.0};
  return pts;
}

const char* preset_name(int i) { return i == 0 ? "desk-small" : "raddet-ti"; }

void BM_Conventional(benchmark::State& state) {
  const auto cfg = make_preset(preset_name(int(state.range(0))));
  const auto pts = scene(cfg, std::size_t(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_conventional(pts, cfg, false));
  state.SetItemsProcessed(state.iterations() * state.range(1));
}

void BM_Synthesize(benchmark::State& state) {
  const auto cfg = make_preset(preset_name(int(state.range(0))));
  const auto pts = scene(cfg, std::size_t(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(synthesize_received(pts, cfg, false));
}

void BM_MatchFilter(benchmark::State& state) {
  const auto cfg = make_preset(preset_name(int(state.range(0))));
  const auto pts = scene(cfg, 8);
  const auto raw = synthesize_received(pts, cfg, true);
  for (auto _ : state) benchmark::DoNotOptimize(match_filter(raw, cfg));
}

void BM_FastMeasuredPsf(benchmark::State& state) {
  const auto cfg = make_preset(preset_name(int(state.range(0))));
  const auto psf = benchmark_psf(cfg, BenchPsf::Measured, 0.99);
  const auto pts = scene(cfg, std::size_t(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_fast(pts, psf, cfg));
  state.counters["psf_cells"] = double(psf.cell_count());
  state.SetItemsProcessed(state.iterations() * state.range(1));
}

void BM_FastSplatWorkers(benchmark::State& state) {
  const auto cfg = make_preset("raddet-ti");
  auto tapered = truncate_psf(analytic_psf(cfg), 0.9999);
  const auto pts = scene(cfg, 2000);
  const FastSimOptions opt{.placement = Placement::Splat, .workers = unsigned(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(simulate_fast(pts, tapered, cfg, opt));
}

void BM_Superpose(benchmark::State& state) {
  const auto cfg = make_preset("raddet-ti");
  Psf psf;
  const std::size_t w = std::size_t(state.range(0));
  psf.window = {w, w, std::min<std::size_t>(w, cfg.n_azimuth)};
  psf.center = {w / 2, w / 2, psf.window.azimuth / 2};
  psf.cells.assign(psf.window.count(), Complex(1.0, 0.5));
  RadarTensor acc(cfg.dims(), TensorKind::Filtered);
  for (auto _ : state) {
    superpose_shifted_psf(acc, {200, 60, 28}, 1.0, psf);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t(psf.cell_count()));
}

}  // namespace

BENCHMARK(BM_Conventional)->Args({0, 200})->Args({1, 200})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Synthesize)->Args({1, 200})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MatchFilter)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FastMeasuredPsf)->Args({0, 200})->Args({1, 200})->Args({1, 2000})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FastSplatWorkers)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Superpose)->Arg(3)->Arg(9)->Arg(27);
BENCHMARK_MAIN();
