#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "radsim/conventional.hpp"
#include "radsim/errors.hpp"
#include "radsim/noise.hpp"
#include "radsim/psf.hpp"
#include "radsim/taper.hpp"

using namespace radsim;

namespace {

// Full-grid analytic PSF scaled to unit peak.
Psf normalized_analytic(const RadarConfig& cfg) {
  Psf p = analytic_psf(cfg);
  const Complex c = p.center_value();
  for (auto& v : p.cells) v /= c;
  return p;
}

// Value of the full PSF at window cell (i, j, l) of `w`.
Complex full_at(const Psf& full, const Psf& w, std::size_t i, std::size_t j, std::size_t l) {
  auto wrap = [](long v, std::size_t n) { return std::size_t(((v % long(n)) + long(n)) % long(n)); };
  return full(wrap(long(full.center.range) + long(i) - long(w.center.range), full.window.range),
              wrap(long(full.center.doppler) + long(j) - long(w.center.doppler),
                   full.window.doppler),
              wrap(long(full.center.azimuth) + long(l) - long(w.center.azimuth),
                   full.window.azimuth));
}

double window_relative_error(const Psf& measured, const Psf& full) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < measured.window.range; ++i)
    for (std::size_t j = 0; j < measured.window.doppler; ++j)
      for (std::size_t l = 0; l < measured.window.azimuth; ++l) {
        const Complex ref = full_at(full, measured, i, j, l);
        num += std::norm(measured(i, j, l) - ref);
        den += std::norm(ref);
      }
  return std::sqrt(num / den);
}

std::vector<RadarTensor> reflector_frames(RadarConfig cfg, const ReflectionPoint& p,
                                          std::size_t n, bool noise) {
  std::vector<RadarTensor> frames;
  const auto base = cfg.rng_seed;
  for (std::size_t f = 0; f < n; ++f) {
    cfg.rng_seed = derive_seed(base, 100 + f);
    frames.push_back(simulate_conventional(std::span(&p, 1), cfg, noise));
  }
  return frames;
}

bool all_odd_or_full(const Psf& p, const Dims& grid) {
  for (std::size_t k = 0; k < 3; ++k)
    if (p.window[k] % 2 == 0 && p.window[k] != grid[k]) return false;
  return true;
}

}  // namespace

TEST(AnalyticPsf, DeskSmallIsASingleCell) {
  const auto cfg = make_preset("desk-small");
  const auto psf = analytic_psf(cfg);
  EXPECT_EQ(psf.window, cfg.dims());
  EXPECT_EQ(psf.source, PsfSource::Analytic);
  EXPECT_EQ(psf.retained_energy_fraction, 1.0);
  EXPECT_NEAR(std::abs(psf.center_value()), std::sqrt(64.0 * 32 * 32), 1e-9);
  double off = 0.0;
  for (std::size_t i = 0; i < psf.cells.size(); ++i)
    if (i != psf.index(psf.center.range, psf.center.doppler, psf.center.azimuth))
      off = std::max(off, std::abs(psf.cells[i]));
  EXPECT_LT(off, 1e-9);
}

TEST(AnalyticPsf, EqualsCenteredDftOfAllOnes) {
  auto cfg = make_preset("desk-small");
  cfg.n_range = 10;
  cfg.n_doppler = 6;
  cfg.n_azimuth = 7;
  cfg.range_window = Taper::Hann;
  cfg.azimuth_window = Taper::Hamming;
  RadarTensor ones(cfg.dims(), TensorKind::RawSignal);
  for (auto& c : ones.cells()) c = 1.0;
  const auto y = oracle::separable_direct_dft(ones, taper_weights(Taper::Hann, 10), {},
                                              taper_weights(Taper::Hamming, 7));
  const auto psf = analytic_psf(cfg);
  const auto expected = oracle::circular_shift(y, psf.center);
  const RadarTensor got(cfg.dims(), TensorKind::Filtered, psf.cells);
  EXPECT_LT(relative_frobenius_distance(got, expected), 1e-12);
}

TEST(AnalyticPsf, HalfBinKernelIsSymmetric) {
  const auto h = axis_response(Taper::Rectangular, 64, 10.5);
  EXPECT_NEAR(std::abs(h[10]), std::abs(h[11]), 1e-12);
  EXPECT_NEAR(std::abs(h[9]), std::abs(h[12]), 1e-12);
  // |D(0.5)| for the unitary Dirichlet kernel.
  const double expected = std::abs(std::sin(std::numbers::pi * 0.5) /
                                   std::sin(std::numbers::pi * 0.5 / 64)) / 8.0;
  EXPECT_NEAR(std::abs(h[10]), expected, 1e-9);
}

TEST(AnalyticPsf, RaddetAzimuthSpreadExceedsRangeSpread) {
  const auto cfg = make_preset("raddet-ti");
  const double az = lobe_width_3db(cfg.azimuth_window, cfg.n_azimuth) / double(cfg.n_azimuth);
  const double rg = lobe_width_3db(cfg.range_window, cfg.n_range) / double(cfg.n_range);
  const double dp = lobe_width_3db(cfg.doppler_window, cfg.n_doppler) / double(cfg.n_doppler);
  EXPECT_GT(az, rg);
  EXPECT_GT(az, dp);
}

TEST(LobeWidth, KnownValues) {
  // Rectangular: ~0.886 bins; Hann: ~1.44 bins.
  EXPECT_NEAR(lobe_width_3db(Taper::Rectangular, 256), 0.886, 0.002);
  EXPECT_NEAR(lobe_width_3db(Taper::Hann, 256), 1.44, 0.005);
}

TEST(TruncatePsf, FullFractionKeepsTheGrid) {
  const auto cfg = make_preset("raddet-ti");
  const auto t = truncate_psf(analytic_psf(cfg), 1.0);
  EXPECT_EQ(t.window, cfg.dims());
  EXPECT_DOUBLE_EQ(t.retained_energy_fraction, 1.0);
}

TEST(TruncatePsf, SingleCellPsfGivesUnitWindow) {
  const auto cfg = make_preset("desk-small");
  const auto t = truncate_psf(analytic_psf(cfg), 0.99);
  EXPECT_EQ(t.window, (Dims{1, 1, 1}));
  EXPECT_NEAR(t.retained_energy_fraction, 1.0, 1e-12);
}

TEST(TruncatePsf, HannTaperedOnGridPsfIsThreeByThree) {
  const auto cfg = make_preset("raddet-ti");
  const auto t = truncate_psf(analytic_psf(cfg), 0.99);
  EXPECT_EQ(t.window, (Dims{3, 3, 1}));
  EXPECT_NEAR(t.retained_energy_fraction, 1.0, 1e-12);
}

TEST(TruncatePsf, OffGridMeasuredPsfShrinksByOverAThousand) {
  const auto cfg = make_preset("raddet-ti");
  const ReflectionPoint p{cfg.reference_range_m, 0.0, 0.0, 1.0};  // 89.29 bins: off-grid
  const auto frames = reflector_frames(cfg, p, 1, false);
  const auto psf = measure_psf(frames, cfg);
  EXPECT_GE(psf.retained_energy_fraction, 0.99);
  EXPECT_GE(double(cfg.cell_count()) / double(psf.cell_count()), 1000.0);
  EXPECT_TRUE(all_odd_or_full(psf, cfg.dims()));
}

TEST(TruncatePsf, MonotoneInFraction) {
  auto cfg = make_preset("desk-small");
  cfg.range_window = Taper::Hamming;
  // Off-grid in range and azimuth so energy spreads over many cells.
  const ReflectionPoint p{10.37 * cfg.range_resolution, 0.0, 0.11, 1.0};
  const auto y = simulate_conventional(std::span(&p, 1), cfg, false);
  Psf full;
  full.window = cfg.dims();
  full.center = argmax_magnitude(y);
  full.cells.assign(y.cells().begin(), y.cells().end());
  std::size_t prev = 0;
  for (double f : {0.5, 0.8, 0.9, 0.95, 0.99, 0.999, 0.9999, 1.0}) {
    const auto t = truncate_psf(full, f);
    EXPECT_GE(t.cell_count(), prev) << f;
    EXPECT_GE(t.retained_energy_fraction, f - 1e-12) << f;
    EXPECT_TRUE(all_odd_or_full(t, cfg.dims())) << f;
    prev = t.cell_count();
  }
}

TEST(TruncatePsf, RetainedFractionMatchesDirectSum) {
  auto cfg = make_preset("desk-small");
  const ReflectionPoint p{20.6 * cfg.range_resolution, 1.3, -0.4, 1.0};
  const auto y = simulate_conventional(std::span(&p, 1), cfg, false);
  Psf full;
  full.window = cfg.dims();
  full.center = argmax_magnitude(y);
  full.cells.assign(y.cells().begin(), y.cells().end());
  for (double f : {0.7, 0.95, 0.99}) {
    const auto t = truncate_psf(full, f);
    double kept = 0.0;
    for (std::size_t i = 0; i < t.window.range; ++i)
      for (std::size_t j = 0; j < t.window.doppler; ++j)
        for (std::size_t l = 0; l < t.window.azimuth; ++l) {
          EXPECT_EQ(t(i, j, l), full_at(full, t, i, j, l));
          kept += std::norm(t(i, j, l));
        }
    EXPECT_NEAR(t.retained_energy_fraction, kept / y.energy(), 1e-12);
  }
}

TEST(TruncatePsf, NoiseFloorModeCoversEveryCellAboveTheFloor) {
  auto cfg = make_preset("desk-small");
  const ReflectionPoint p{10.5 * cfg.range_resolution, 0.0, 0.0, 1.0};
  const auto y = simulate_conventional(std::span(&p, 1), cfg, false);
  Psf full;
  full.window = cfg.dims();
  full.center = argmax_magnitude(y);
  full.cells.assign(y.cells().begin(), y.cells().end());
  const double floor = 20.0;
  const auto t = truncate_psf(full, TruncationOptions{TruncationMode::NoiseFloor, 0.0, floor});
  EXPECT_EQ(t.window.doppler, 1u);
  EXPECT_EQ(t.window.azimuth, 1u);
  EXPECT_LT(t.window.range, cfg.n_range);
  // Everything outside the window is below the floor.
  const long half = long(t.window.range / 2);
  for (long off = half + 1; off < long(cfg.n_range) - half; ++off) {
    const std::size_t i = std::size_t(long(full.center.range) + off) % cfg.n_range;
    EXPECT_LT(std::abs(full(i, full.center.doppler, full.center.azimuth)), floor) << off;
  }
  const std::size_t edge = (full.center.range + std::size_t(half)) % cfg.n_range;
  EXPECT_GE(std::abs(full(edge, full.center.doppler, full.center.azimuth)), floor);
}

TEST(TruncatePsf, Errors) {
  const auto cfg = make_preset("desk-small");
  Psf zero;
  zero.window = cfg.dims();
  zero.cells.assign(cfg.cell_count(), Complex{});
  EXPECT_THROW(truncate_psf(zero, 0.99), CalibrationError);
  EXPECT_THROW(truncate_psf(analytic_psf(cfg), 0.0), ValidationError);
  EXPECT_THROW(truncate_psf(analytic_psf(cfg), 1.5), ValidationError);
}

TEST(MeasurePsf, SingleNoiselessFrameRecoversTheAnalyticWindow) {
  const auto cfg = make_preset("raddet-ti");
  const auto p = point_at_cell({89, 0, 0}, cfg, Complex(0.3, -0.7));
  const auto frames = reflector_frames(cfg, p, 1, false);
  const auto psf = measure_psf(frames, cfg);
  EXPECT_EQ(psf.source, PsfSource::Measured);
  const auto expected = truncate_psf(normalized_analytic(cfg), 0.99);
  ASSERT_EQ(psf.window, expected.window);
  ASSERT_EQ(psf.center, expected.center);
  for (std::size_t i = 0; i < psf.cells.size(); ++i)
    EXPECT_LT(std::abs(psf.cells[i] - expected.cells[i]), 1e-12);
  EXPECT_NEAR(std::abs(psf.center_value() - Complex(1.0, 0.0)), 0.0, 1e-15);
}

TEST(MeasurePsf, HundredNoisyFramesRoundTrip) {
  auto cfg = make_preset("raddet-ti");
  cfg.rng_seed = 77;
  const auto p = point_at_cell({89, 0, 0}, cfg, 1.0);
  const auto frames = reflector_frames(cfg, p, 100, true);
  const auto psf = measure_psf(frames, cfg);
  EXPECT_LE(window_relative_error(psf, normalized_analytic(cfg)), 1e-2);
  EXPECT_TRUE(all_odd_or_full(psf, cfg.dims()));
}

TEST(MeasurePsf, MagnitudeAveragingStillFindsThePeak) {
  auto cfg = make_preset("desk-small");
  cfg.rng_seed = 3;
  const auto p = point_at_cell({20, 0, 4}, cfg, 1.0);
  const auto frames = reflector_frames(cfg, p, 4, true);
  MeasureOptions opt;
  opt.magnitude_average = true;
  const auto psf = measure_psf(frames, cfg, opt);
  EXPECT_EQ(psf.center_value(), Complex(1.0, 0.0));
  EXPECT_EQ(argmax_magnitude(RadarTensor(psf.window, TensorKind::Filtered, psf.cells)),
            psf.center);
}

TEST(MeasurePsf, PureNoiseIsACalibrationFailure) {
  auto cfg = make_preset("desk-small");
  cfg.rng_seed = 11;
  const auto frames = reflector_frames(cfg, ReflectionPoint{0, 0, 0, 0.0}, 3, true);
  EXPECT_THROW(measure_psf(frames, cfg), CalibrationError);
  EXPECT_THROW(measure_psf(std::span<const RadarTensor>{}, cfg), CalibrationError);
}

TEST(MeasurePsf, RejectsMismatchedFrames) {
  const auto cfg = make_preset("desk-small");
  std::vector<RadarTensor> frames{RadarTensor({4, 4, 4}, TensorKind::Filtered)};
  EXPECT_THROW(measure_psf(frames, cfg), ValidationError);
}

TEST(NoiseEstimate, NoiselessEmptySceneIsZero) {
  const auto cfg = make_preset("desk-small");
  const auto y = simulate_conventional({}, cfg, false);
  EXPECT_EQ(estimate_noise_variance(y), 0.0);
  EXPECT_EQ(estimate_noise_variance(y, CellRegion{0, 3, 0, 3, 0, 3}), 0.0);
}

TEST(NoiseEstimate, FullRegionOfNoiseOnlyTensor) {
  auto cfg = make_preset("desk-small");
  cfg.rng_seed = 1234;
  const auto y = simulate_conventional({}, cfg, true);
  ASSERT_EQ(y.size(), 65536u);
  const double est = estimate_noise_variance(y, CellRegion{0, 64, 0, 32, 0, 32});
  EXPECT_GE(est, 0.97);
  EXPECT_LE(est, 1.03);
}

TEST(NoiseEstimate, AutoRegionIgnoresAStrongPoint) {
  auto cfg = make_preset("raddet-ti");
  cfg.noise_variance = 0.5;
  cfg.rng_seed = 8;
  const ReflectionPoint p{12.3, 2.2, 0.3, 40.0};
  const auto y = simulate_conventional(std::span(&p, 1), cfg, true);
  EXPECT_NEAR(estimate_noise_variance(y) / cfg.noise_variance, 1.0, 0.10);
}

TEST(NoiseEstimate, RegionErrors) {
  const auto cfg = make_preset("desk-small");
  const auto y = simulate_conventional({}, cfg, false);
  EXPECT_THROW(estimate_noise_variance(y, CellRegion{}), ValidationError);
  EXPECT_THROW(estimate_noise_variance(y, CellRegion{0, 65, 0, 1, 0, 1}), ValidationError);
}

TEST(CalibratePsfGain, MatchesTheConventionalUnitResponse) {
  const auto cfg = make_preset("raddet-ti");
  const auto p = point_at_cell({89, 0, 0}, cfg, 1.0);
  const auto psf = calibrate_psf_gain(measure_psf(reflector_frames(cfg, p, 1, false), cfg), cfg);
  const auto unit = point_at_cell({0, 0, 0}, cfg, 1.0);
  const auto y = simulate_conventional(std::span(&unit, 1), cfg, false);
  EXPECT_LT(std::abs(psf.center_value() - y(0, 0, 0)), 1e-9);
}
