#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "radsim/config.hpp"
#include "radsim/fast_sim.hpp"
#include "radsim/imaging.hpp"
#include "radsim/psf.hpp"
#include "radsim/scene.hpp"
#include "radsim/tensor.hpp"

namespace radsim {

// Tensor file: "RSRTEN1", u32 x3 dims, u8 kind, little-endian f32 (re, im) pairs.
std::vector<std::uint8_t> encode_tensor(const RadarTensor& t);
RadarTensor decode_tensor(const std::vector<std::uint8_t>& bytes);
void write_tensor(const std::filesystem::path& path, const RadarTensor& t);
RadarTensor read_tensor(const std::filesystem::path& path);

// Calibration file: "RSRCAL1", u32 x3 window dims, u32 x3 center, f64 noise
// variance, f64 retained fraction, little-endian f32 (re, im) pairs.
std::vector<std::uint8_t> encode_calibration(const CalibrationBundle& bundle);
CalibrationBundle decode_calibration(const std::vector<std::uint8_t>& bytes);
void write_calibration(const std::filesystem::path& path, const CalibrationBundle& bundle);
CalibrationBundle read_calibration(const std::filesystem::path& path);

/// Affine map between dB values and 16-bit pixel codes.
struct ImageEncoding {
  double floor_db = -120.0;
  double peak_db = 0.0;
  std::size_t azimuth_column_offset = 0;  // PNG column = signed azimuth bin + offset

  std::uint16_t encode(double db) const noexcept;
  double decode(std::uint16_t code) const noexcept;
};

/// Writes the dB image as a 16-bit grayscale PNG (rows = range bins, far range at
/// the top, azimuth centered) plus `<path>.json` describing the affine map.
ImageEncoding write_image_png(const std::filesystem::path& path, const RadarImage& db_image,
                              double floor_db);
/// Reads a PNG written by write_image_png and returns the dB image in native bin order.
RadarImage read_image_png(const std::filesystem::path& path, ImageEncoding* encoding = nullptr);

/// Writes an 8- or 16-bit grayscale PNG of raw codes (row 0 at the top).
void write_gray16_png(const std::filesystem::path& path, std::size_t width, std::size_t height,
                      const std::vector<std::uint16_t>& codes);
std::vector<std::uint16_t> read_gray16_png(const std::filesystem::path& path,
                                           std::size_t* width, std::size_t* height);

struct Annotation {
  ObjectClass class_label = ObjectClass::Pole;
  BinBox box{};
  double range_min_m = 0.0, range_max_m = 0.0;
  double azimuth_min_deg = 0.0, azimuth_max_deg = 0.0;

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

struct FrameAnnotations {
  std::size_t frame = 0;
  std::uint64_t seed = 0;
  std::vector<Annotation> objects;

  friend bool operator==(const FrameAnnotations&, const FrameAnnotations&) = default;
};

FrameAnnotations make_annotations(const AnnotatedScene& scene, const RadarConfig& cfg,
                                  std::size_t frame);
std::string annotations_to_json(const FrameAnnotations& a);
FrameAnnotations annotations_from_json(std::string_view text);

std::string scene_to_json(const AnnotatedScene& scene);
AnnotatedScene scene_from_json(std::string_view text);
std::string scene_spec_to_json(const SceneSpec& spec);
SceneSpec scene_spec_from_json(std::string_view text, const SceneSpec& base = {});

std::string equivalence_to_json(const EquivalenceReport& r);

std::string read_text_file(const std::filesystem::path& path);
/// Writes via a temporary sibling and renames into place.
void write_text_file(const std::filesystem::path& path, const std::string& text);
void write_binary_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path);

}  // namespace radsim
