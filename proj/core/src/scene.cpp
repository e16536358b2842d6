#include "radsim/scene.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "radsim/errors.hpp"
#include "radsim/noise.hpp"

namespace radsim {

namespace {

constexpr double kFieldOfViewRad = 60.0 * std::numbers::pi / 180.0;
constexpr int kMaxPlacementAttempts = 200;

constexpr double kCarDepth = 4.5;
constexpr double kCarWidth = 1.8;
constexpr double kCarRcs = 10.0;
constexpr double kCarRcsJitter = 2.0;
constexpr double kPoleRcs = 0.0;
constexpr double kClutterRcs = -10.0;
constexpr double kClutterRcsJitter = 3.0;

struct Xy {
  double x, y;
};

ReflectionPoint point_from_xy(Xy p, double velocity) {
  ReflectionPoint r;
  r.range_m = std::hypot(p.x, p.y);
  r.azimuth_rad = std::atan2(p.x, p.y);
  r.radial_velocity_mps = velocity;
  r.amplitude = Complex{1.0, 0.0};
  return r;
}

bool points_valid(const SceneObject& o, const RadarConfig& cfg, const SceneSpec& spec) {
  for (const auto& p : o.points) {
    if (p.range_m < spec.range_min_m || p.range_m > spec.range_max_m) return false;
    try {
      validate_point(p, cfg);
    } catch (const ValidationError&) {
      return false;
    }
  }
  return true;
}

// Scatterers spread evenly along the radar-facing front edge and the side edge
// that faces the radar, with a little jitter.
void sample_car_edges(SceneObject& car, std::mt19937_64& rng, std::size_t count) {
  const Xy c{car.center_range_m * std::sin(car.center_azimuth_rad),
             car.center_range_m * std::cos(car.center_azimuth_rad)};
  const double front_y = c.y - car.depth_m / 2;
  const double side_x = c.x >= 0 ? c.x - car.cross_m / 2 : c.x + car.cross_m / 2;
  const double front_len = car.cross_m;
  const double total = front_len + car.depth_m;
  std::uniform_real_distribution<double> jitter(-0.25, 0.25);
  for (std::size_t i = 0; i < count; ++i) {
    const double u = (double(i) + 0.5 + jitter(rng)) / double(count) * total;
    Xy p;
    if (u < front_len) {
      p = {c.x - car.cross_m / 2 + u, front_y};
    } else {
      p = {side_x, front_y + (u - front_len)};
    }
    car.points.push_back(point_from_xy(p, car.radial_velocity_mps));
  }
}

void validate_spec(const SceneSpec& spec, const RadarConfig& cfg) {
  if (!(spec.range_min_m > 0)) throw ValidationError("range_min_m", "must be > 0");
  if (!(spec.range_max_m > spec.range_min_m))
    throw ValidationError("range_max_m", "must exceed range_min_m");
  if (!(spec.range_max_m < cfg.unambiguous_range() - cfg.range_resolution))
    throw ValidationError("range_max_m", "must stay inside the unambiguous range");
  const double vmax = cfg.max_unambiguous_velocity();
  if (!(spec.velocity_min_mps >= -vmax && spec.velocity_max_mps < vmax &&
        spec.velocity_min_mps <= spec.velocity_max_mps))
    throw ValidationError("velocity_span", "must lie inside the unambiguous velocity interval");
  if (!(spec.clutter_density >= 0) || !std::isfinite(spec.clutter_density))
    throw ValidationError("clutter_density", "must be finite and >= 0");
}

}  // namespace

std::string_view to_string(ObjectClass c) {
  switch (c) {
    case ObjectClass::Car: return "car";
    case ObjectClass::Pole: return "pole";
    case ObjectClass::Clutter: return "clutter";
  }
  return "clutter";
}

ObjectClass parse_object_class(std::string_view name) {
  if (name == "car") return ObjectClass::Car;
  if (name == "pole") return ObjectClass::Pole;
  if (name == "clutter") return ObjectClass::Clutter;
  throw ValidationError("class_label", "unknown object class '" + std::string(name) + "'");
}

std::vector<ReflectionPoint> AnnotatedScene::all_points() const {
  std::vector<ReflectionPoint> out;
  for (const auto& o : objects) out.insert(out.end(), o.points.begin(), o.points.end());
  return out;
}

std::pair<long, long> occupied_cell(const ReflectionPoint& p, const RadarConfig& cfg) {
  const long r = std::lround(p.range_m / cfg.range_resolution);
  const long a = std::lround(double(cfg.n_azimuth) / 2.0 * std::sin(p.azimuth_rad));
  return {r, a};
}

BinBox bounding_box(const SceneObject& object, const RadarConfig& cfg) {
  if (object.points.empty()) throw ValidationError("points", "object has no scatterers");
  BinBox b;
  bool first = true;
  for (const auto& p : object.points) {
    const auto [r, a] = occupied_cell(p, cfg);
    if (first) {
      b = {r, r, a, a};
      first = false;
    } else {
      b.r0 = std::min(b.r0, r);
      b.r1 = std::max(b.r1, r);
      b.a0 = std::min(b.a0, a);
      b.a1 = std::max(b.a1, a);
    }
  }
  b.r0 -= 1;
  b.r1 += 1;
  b.a0 -= 1;
  b.a1 += 1;
  return b;
}

AnnotatedScene generate_scene(const SceneSpec& spec, const RadarConfig& cfg) {
  validate(cfg);
  validate_spec(spec, cfg);

  AnnotatedScene scene;
  scene.seed = spec.seed;
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> azimuth(-kFieldOfViewRad, kFieldOfViewRad);
  std::uniform_real_distribution<double> velocity(spec.velocity_min_mps, spec.velocity_max_mps);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> car_points(4, 8);

  const auto n_clutter =
      static_cast<std::size_t>(std::llround(spec.clutter_density * (spec.range_max_m - spec.range_min_m)));

  auto place = [&](ObjectClass cls) {
    for (int attempt = 0; attempt < kMaxPlacementAttempts; ++attempt) {
      SceneObject o;
      o.class_label = cls;
      o.center_azimuth_rad = azimuth(rng);
      switch (cls) {
        case ObjectClass::Car: {
          o.depth_m = kCarDepth * (0.9 + 0.2 * unit(rng));
          o.cross_m = kCarWidth * (0.9 + 0.2 * unit(rng));
          const double lo = spec.range_min_m + o.depth_m / 2;
          const double hi = spec.range_max_m - o.depth_m / 2;
          if (hi <= lo) throw SceneError("range span too short for a car");
          o.center_range_m = lo + (hi - lo) * unit(rng);
          o.radial_velocity_mps = velocity(rng);
          o.rcs_dbsm = kCarRcs + kCarRcsJitter * (2 * unit(rng) - 1);
          sample_car_edges(o, rng, car_points(rng));
          break;
        }
        case ObjectClass::Pole:
        case ObjectClass::Clutter: {
          const bool pole = cls == ObjectClass::Pole;
          o.depth_m = o.cross_m = pole ? 0.3 : 0.5;
          o.center_range_m =
              spec.range_min_m + (spec.range_max_m - spec.range_min_m) * unit(rng);
          o.radial_velocity_mps = 0.0;
          o.rcs_dbsm = pole ? kPoleRcs : kClutterRcs + kClutterRcsJitter * (2 * unit(rng) - 1);
          ReflectionPoint p;
          p.range_m = o.center_range_m;
          p.azimuth_rad = o.center_azimuth_rad;
          o.points.push_back(p);
          break;
        }
      }
      if (!points_valid(o, cfg, spec)) continue;
      const BinBox box = bounding_box(o, cfg);
      bool overlap = false;
      for (const auto& b : scene.boxes) overlap = overlap || b.overlaps(box);
      if (overlap) continue;
      scene.objects.push_back(std::move(o));
      scene.boxes.push_back(box);
      return;
    }
    throw SceneError("cannot place " + std::string(to_string(cls)) + " without overlap after " +
                     std::to_string(kMaxPlacementAttempts) + " attempts");
  };

  for (std::size_t i = 0; i < spec.n_cars; ++i) place(ObjectClass::Car);
  for (std::size_t i = 0; i < spec.n_poles; ++i) place(ObjectClass::Pole);
  for (std::size_t i = 0; i < n_clutter; ++i) place(ObjectClass::Clutter);
  return scene;
}

AnnotatedScene assign_amplitudes(AnnotatedScene scene, const RadarConfig& cfg) {
  std::mt19937_64 rng(derive_seed(scene.seed, std::uint64_t(NoiseStream::ScenePhase)));
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  for (auto& o : scene.objects) {
    if (o.points.empty()) continue;
    const double power = std::pow(10.0, o.rcs_dbsm / 10.0) / double(o.points.size());
    for (auto& p : o.points) {
      if (!(p.range_m > 0)) throw ValidationError("range_m", "zero range has no amplitude");
      const double falloff = cfg.reference_range_m / p.range_m;
      p.amplitude = std::polar(std::sqrt(power) * falloff * falloff, phase(rng));
    }
  }
  return scene;
}

}  // namespace radsim
