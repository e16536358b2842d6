#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "radsim/config.hpp"
#include "radsim/grid.hpp"

namespace radsim {

enum class ObjectClass { Car, Pole, Clutter };

std::string_view to_string(ObjectClass c);
ObjectClass parse_object_class(std::string_view name);

struct SceneObject {
  ObjectClass class_label = ObjectClass::Pole;
  double center_range_m = 0.0;
  double center_azimuth_rad = 0.0;
  double depth_m = 0.0;  // extent along the line of sight
  double cross_m = 0.0;  // extent across it
  double radial_velocity_mps = 0.0;
  double rcs_dbsm = 0.0;
  std::vector<ReflectionPoint> points;
};

/// Axis-aligned box in (range bin, signed azimuth bin) coordinates, inclusive.
struct BinBox {
  long r0 = 0, r1 = 0;
  long a0 = 0, a1 = 0;

  bool contains(long r, long a) const noexcept { return r0 <= r && r <= r1 && a0 <= a && a <= a1; }
  bool overlaps(const BinBox& o) const noexcept {
    return r0 <= o.r1 && o.r0 <= r1 && a0 <= o.a1 && o.a0 <= a1;
  }
  friend bool operator==(const BinBox&, const BinBox&) = default;
};

struct AnnotatedScene {
  std::vector<SceneObject> objects;
  std::vector<BinBox> boxes;  // one per object
  std::uint64_t seed = 0;

  std::vector<ReflectionPoint> all_points() const;
};

struct SceneSpec {
  std::size_t n_cars = 0;
  std::size_t n_poles = 0;
  double clutter_density = 0.0;  // clutter scatterers per metre of range span
  double range_min_m = 5.0;
  double range_max_m = 30.0;
  double velocity_min_mps = -5.0;
  double velocity_max_mps = 5.0;
  std::uint64_t seed = 0;
};

/// Nearest (range bin, signed azimuth bin) of a point.
std::pair<long, long> occupied_cell(const ReflectionPoint& p, const RadarConfig& cfg);

/// Tight bounds of the object's occupied cells, widened by one bin on each side.
BinBox bounding_box(const SceneObject& object, const RadarConfig& cfg);

/// Seeded parametric scene: cars sampled on their radar-facing edges, single-point
/// poles and clutter, no two footprints overlapping. Amplitudes are left at 1;
/// call assign_amplitudes next.
AnnotatedScene generate_scene(const SceneSpec& spec, const RadarConfig& cfg);

/// |a_i| = sqrt(10^(rcs/10) / N) * (R_ref / R_i)^2 with a seeded uniform phase.
AnnotatedScene assign_amplitudes(AnnotatedScene scene, const RadarConfig& cfg);

}  // namespace radsim
