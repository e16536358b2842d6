#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "radsim/config.hpp"
#include "radsim/errors.hpp"
#include "radsim/grid.hpp"

using namespace radsim;

TEST(MapPointToGrid, OriginMapsToDcBins) {
  const auto cfg = make_preset("desk-small");
  const GridPoint g = map_point_to_grid({0.0, 0.0, 0.0, {2.0, -1.0}}, cfg);
  EXPECT_EQ(g.k_range, 0.0);
  EXPECT_EQ(g.k_doppler, 0.0);
  EXPECT_EQ(g.k_azimuth, 0.0);
  EXPECT_EQ(g.amplitude, Complex(2.0, -1.0));
}

TEST(MapPointToGrid, RangeIsLinearInBins) {
  for (const char* name : {"desk-small", "raddet-ti"}) {
    const auto cfg = make_preset(name);
    const GridPoint g = map_point_to_grid({10 * cfg.range_resolution, 0.0, 0.0, 1.0}, cfg);
    EXPECT_EQ(g.k_range, 10.0) << name;
  }
}

TEST(MapPointToGrid, RaddetReferenceRange) {
  const auto cfg = make_preset("raddet-ti");
  const GridPoint g = map_point_to_grid({25.0, 0.0, 0.0, 1.0}, cfg);
  EXPECT_NEAR(g.k_range, 89.28571428571428, 1e-12);
}

TEST(MapPointToGrid, DopplerAndAzimuthFormulas) {
  const auto cfg = make_preset("desk-small");
  const double v = 3.0, az = 0.4;
  const GridPoint g = map_point_to_grid({5.0, v, az, 1.0}, cfg);
  const double kd = 2 * v / cfg.carrier_wavelength * cfg.n_doppler * cfg.pulse_repetition_interval;
  EXPECT_NEAR(g.k_doppler, kd, 1e-9);
  EXPECT_NEAR(g.k_azimuth, cfg.n_azimuth / 2.0 * std::sin(az), 1e-12);

  // Negative velocity and azimuth wrap into the upper half of the grid.
  const GridPoint n = map_point_to_grid({5.0, -v, -az, 1.0}, cfg);
  EXPECT_NEAR(n.k_doppler, cfg.n_doppler - kd, 1e-9);
  EXPECT_NEAR(n.k_azimuth, cfg.n_azimuth - cfg.n_azimuth / 2.0 * std::sin(az), 1e-12);
}

TEST(MapPointToGrid, RejectsOutOfDomainCoordinates) {
  const auto cfg = make_preset("desk-small");
  auto field_of = [&](ReflectionPoint p) {
    try {
      map_point_to_grid(p, cfg);
    } catch (const ValidationError& e) {
      return e.field();
    }
    return std::string("none");
  };
  EXPECT_EQ(field_of({-1.0, 0, 0, 1.0}), "range_m");
  EXPECT_EQ(field_of({cfg.unambiguous_range(), 0, 0, 1.0}), "range_m");
  EXPECT_EQ(field_of({1.0, cfg.max_unambiguous_velocity(), 0, 1.0}), "radial_velocity_mps");
  EXPECT_EQ(field_of({1.0, 0, std::numbers::pi / 2, 1.0}), "azimuth_rad");
  EXPECT_EQ(field_of({1.0, 0, 0, Complex(NAN, 0)}), "amplitude");
  EXPECT_EQ(field_of({NAN, 0, 0, 1.0}), "range_m");
}

TEST(MapPointToGrid, AzimuthZeroIsBinZeroForAnyConfig) {
  for (std::size_t na : {2u, 3u, 7u, 30u, 64u}) {
    auto cfg = make_preset("desk-small");
    cfg.n_azimuth = na;
    EXPECT_EQ(map_point_to_grid({1.0, 0.5, 0.0, 1.0}, cfg).k_azimuth, 0.0);
  }
}

TEST(MapPointToGrid, DopplerIsPeriodicInTheAmbiguityVelocity) {
  // v and v + lambda/(2 PRI) cannot both pass validation, so compare the mapped
  // bin of v against the wrapped Doppler formula evaluated at v + period.
  const auto cfg = make_preset("desk-small");
  const double period = cfg.doppler_velocity_period();
  auto raw_bin = [&](double v) {
    return 2 * v / cfg.carrier_wavelength * double(cfg.n_doppler) * cfg.pulse_repetition_interval;
  };
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> v(-cfg.max_unambiguous_velocity(),
                                           cfg.max_unambiguous_velocity());
  for (int i = 0; i < 50; ++i) {
    const double v0 = v(rng);
    const double k0 = map_point_to_grid({1.0, v0, 0.1, 1.0}, cfg).k_doppler;
    EXPECT_NEAR(raw_bin(v0 + period) - raw_bin(v0), double(cfg.n_doppler), 1e-9);
    EXPECT_NEAR(wrap_bin(raw_bin(v0 + period), cfg.n_doppler), k0, 1e-9);
  }
}

TEST(MapPointToGrid, InjectiveWithinOneUnambiguousInterval) {
  const auto cfg = make_preset("desk-small");
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> r(0.0, cfg.unambiguous_range());
  std::uniform_real_distribution<double> v(-cfg.max_unambiguous_velocity(),
                                           cfg.max_unambiguous_velocity());
  std::uniform_real_distribution<double> az(-1.5, 1.5);
  for (int i = 0; i < 500; ++i) {
    const ReflectionPoint a{r(rng), v(rng), az(rng), 1.0};
    const ReflectionPoint b{r(rng), v(rng), az(rng), 1.0};
    const auto ga = map_point_to_grid(a, cfg);
    const auto gb = map_point_to_grid(b, cfg);
    EXPECT_FALSE(ga.k_range == gb.k_range && ga.k_doppler == gb.k_doppler &&
                 ga.k_azimuth == gb.k_azimuth);
  }
}

TEST(PointAtCell, RoundTripsThroughTheGridMapping) {
  const auto cfg = make_preset("raddet-ti");
  for (std::size_t r : {0u, 1u, 89u, 255u})
    for (std::size_t d : {0u, 1u, 31u, 32u, 63u})
      for (std::size_t a : {0u, 1u, 14u, 16u, 29u}) {
        if (2 * a == cfg.n_azimuth) continue;
        const auto p = point_at_cell({r, d, a}, cfg, 1.0);
        const auto g = map_point_to_grid(p, cfg);
        EXPECT_EQ(g.k_range, double(r));
        EXPECT_EQ(g.k_doppler, double(d));
        EXPECT_EQ(g.k_azimuth, double(a));
      }
  EXPECT_THROW(point_at_cell({0, 0, 15}, cfg, 1.0), ValidationError);
}

TEST(Presets, DeskSmallDims) {
  const auto cfg = make_preset("desk-small");
  EXPECT_EQ(cfg.dims(), (Dims{64, 32, 32}));
  EXPECT_NO_THROW(validate(cfg));
}

TEST(Presets, RaddetResolutions) {
  const auto cfg = make_preset("raddet-ti");
  EXPECT_EQ(cfg.range_resolution, 0.28);
  EXPECT_EQ(cfg.n_azimuth, 30u);
  EXPECT_NEAR(cfg.unambiguous_range(), 71.68, 1e-12);
  const double limit = 3.9 * std::numbers::pi / 180.0;
  EXPECT_LE(cfg.azimuth_resolution_rad(), limit);
  EXPECT_GT(2.0 / double(cfg.n_azimuth - 1), limit);
}

TEST(Presets, UnknownNameIsRejected) {
  EXPECT_THROW(make_preset("carrada"), ValidationError);
}

TEST(Config, ValidationNamesTheField) {
  auto cfg = make_preset("desk-small");
  cfg.n_doppler = 1;
  try {
    validate(cfg);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "n_doppler");
  }
  cfg = make_preset("desk-small");
  cfg.noise_variance = -1;
  EXPECT_THROW(validate(cfg), ValidationError);
}

TEST(Config, JsonRoundTripAndOverlay) {
  auto cfg = make_preset("raddet-ti");
  cfg.rng_seed = 123456789012345ull;
  cfg.noise_variance = 0.3;
  const auto back = config_from_json(config_to_json(cfg));
  EXPECT_EQ(config_to_json(back), config_to_json(cfg));
  EXPECT_EQ(back.range_window, Taper::Hann);

  const auto overlay = config_from_json(R"({"noise_variance": 2.5})", cfg);
  EXPECT_EQ(overlay.noise_variance, 2.5);
  EXPECT_EQ(overlay.n_range, cfg.n_range);
  EXPECT_THROW(config_from_json(R"({"n_rnage": 3})", cfg), ValidationError);
  EXPECT_THROW(config_from_json(R"({"n_range": 1})", cfg), ValidationError);
}

TEST(Config, MinElementsForBeamwidth) {
  EXPECT_EQ(min_elements_for_beamwidth(2.0 / 30.0), 30u);
  EXPECT_EQ(min_elements_for_beamwidth(2.0 / 30.0 + 1e-12), 30u);
  EXPECT_EQ(min_elements_for_beamwidth(3.9 * std::numbers::pi / 180.0), 30u);
}
