#include "radsim/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>
#include <png.h>

#include "radsim/errors.hpp"

namespace radsim {

using nlohmann::json;

namespace {

constexpr char kTensorMagic[] = "RSRTEN1";
constexpr char kCalibrationMagic[] = "RSRCAL1";
constexpr std::size_t kMagicSize = 7;

class ByteWriter {
 public:
  void raw(const char* s, std::size_t n) { bytes_.insert(bytes_.end(), s, s + n); }
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(std::uint8_t(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes_.push_back(std::uint8_t(v >> (8 * i)));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
};

class ByteReader {
 public:
  ByteReader(const std::vector<std::uint8_t>& bytes, const char* what) : b_(bytes), what_(what) {}

  void expect_magic(const char* magic) {
    need(kMagicSize);
    if (std::memcmp(b_.data() + pos_, magic, kMagicSize) != 0)
      throw FormatError(std::string(what_) + ": bad magic");
    pos_ += kMagicSize;
  }
  std::uint8_t u8() {
    need(1);
    return b_[pos_++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(b_[pos_++]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(b_[pos_++]) << (8 * i);
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::size_t remaining() const noexcept { return b_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (b_.size() - pos_ < n) throw FormatError(std::string(what_) + ": truncated file");
  }
  const std::vector<std::uint8_t>& b_;
  const char* what_;
  std::size_t pos_ = 0;
};

std::uint32_t checked_u32(std::size_t v, const char* what) {
  if (v > 0xFFFFFFFFu) throw FormatError(std::string(what) + " exceeds u32");
  return std::uint32_t(v);
}

void write_cells(ByteWriter& w, std::span<const Complex> cells) {
  for (const auto& c : cells) {
    w.f32(static_cast<float>(c.real()));
    w.f32(static_cast<float>(c.imag()));
  }
}

std::vector<Complex> read_cells(ByteReader& r, std::size_t count, const char* what) {
  if (r.remaining() != count * 8)
    throw FormatError(std::string(what) + ": payload size does not match dims");
  std::vector<Complex> cells(count);
  for (auto& c : cells) {
    const float re = r.f32();
    const float im = r.f32();
    c = Complex(re, im);
  }
  return cells;
}

// libpng reports errors by longjmp; these helpers keep only trivially
// destructible locals between setjmp and the libpng calls.
bool png_write_gray16(std::FILE* fp, std::size_t width, std::size_t height,
                      const std::uint8_t* big_endian_rows) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) return false;
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, png_uint_32(width), png_uint_32(height), 16, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (std::size_t row = 0; row < height; ++row)
    png_write_row(png, const_cast<png_bytep>(big_endian_rows + row * width * 2));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

struct PngHeader {
  png_uint_32 width = 0, height = 0;
  int bit_depth = 0, color_type = 0;
};

bool png_read_gray(std::FILE* fp, PngHeader* header, std::vector<std::uint8_t>* rows) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) return false;
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_init_io(png, fp);
  png_read_info(png, info);
  header->width = png_get_image_width(png, info);
  header->height = png_get_image_height(png, info);
  header->bit_depth = png_get_bit_depth(png, info);
  header->color_type = png_get_color_type(png, info);
  if (header->color_type != PNG_COLOR_TYPE_GRAY ||
      (header->bit_depth != 8 && header->bit_depth != 16)) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  rows->resize(rowbytes * header->height);
  for (png_uint_32 r = 0; r < header->height; ++r) png_read_row(png, rows->data() + r * rowbytes, nullptr);
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
}

double azimuth_deg_of_bin(long a, std::size_t n) {
  const double s = std::clamp(2.0 * double(a) / double(n), -1.0, 1.0);
  return std::asin(s) * 180.0 / std::numbers::pi;
}

json box_json(const BinBox& b) {
  return json{{"r0", b.r0}, {"r1", b.r1}, {"a0", b.a0}, {"a1", b.a1}};
}

BinBox box_from(const json& j) {
  return {j.at("r0").get<long>(), j.at("r1").get<long>(), j.at("a0").get<long>(),
          j.at("a1").get<long>()};
}

}  // namespace

std::vector<std::uint8_t> encode_tensor(const RadarTensor& t) {
  ByteWriter w;
  w.raw(kTensorMagic, kMagicSize);
  w.u32(checked_u32(t.dims().range, "range"));
  w.u32(checked_u32(t.dims().doppler, "doppler"));
  w.u32(checked_u32(t.dims().azimuth, "azimuth"));
  w.u8(static_cast<std::uint8_t>(t.kind()));
  write_cells(w, t.cells());
  return w.take();
}

RadarTensor decode_tensor(const std::vector<std::uint8_t>& bytes) {
  ByteReader r(bytes, "tensor");
  r.expect_magic(kTensorMagic);
  Dims dims;
  dims.range = r.u32();
  dims.doppler = r.u32();
  dims.azimuth = r.u32();
  const std::uint8_t kind = r.u8();
  if (kind > 1) throw FormatError("tensor: unknown kind byte");
  auto cells = read_cells(r, dims.count(), "tensor");
  return RadarTensor(dims, static_cast<TensorKind>(kind), std::move(cells));
}

void write_tensor(const std::filesystem::path& path, const RadarTensor& t) {
  write_binary_file(path, encode_tensor(t));
}

RadarTensor read_tensor(const std::filesystem::path& path) {
  return decode_tensor(read_binary_file(path));
}

std::vector<std::uint8_t> encode_calibration(const CalibrationBundle& bundle) {
  const Psf& psf = bundle.psf;
  if (psf.cells.size() != psf.window.count())
    throw ValidationError("psf", "cell count does not match window");
  ByteWriter w;
  w.raw(kCalibrationMagic, kMagicSize);
  for (std::size_t k = 0; k < 3; ++k) w.u32(checked_u32(psf.window[k], "window"));
  for (std::size_t k = 0; k < 3; ++k) w.u32(checked_u32(psf.center[k], "center"));
  w.f64(bundle.noise_variance);
  w.f64(psf.retained_energy_fraction);
  write_cells(w, psf.cells);
  return w.take();
}

CalibrationBundle decode_calibration(const std::vector<std::uint8_t>& bytes) {
  ByteReader r(bytes, "calibration");
  r.expect_magic(kCalibrationMagic);
  CalibrationBundle b;
  b.psf.window.range = r.u32();
  b.psf.window.doppler = r.u32();
  b.psf.window.azimuth = r.u32();
  b.psf.center.range = r.u32();
  b.psf.center.doppler = r.u32();
  b.psf.center.azimuth = r.u32();
  b.noise_variance = r.f64();
  b.psf.retained_energy_fraction = r.f64();
  b.psf.cells = read_cells(r, b.psf.window.count(), "calibration");
  b.psf.source = PsfSource::Measured;
  b.frames_averaged = 1;
  for (std::size_t k = 0; k < 3; ++k)
    if (b.psf.center[k] >= b.psf.window[k]) throw FormatError("calibration: center outside window");
  if (!(b.noise_variance >= 0)) throw FormatError("calibration: negative noise variance");
  return b;
}

void write_calibration(const std::filesystem::path& path, const CalibrationBundle& bundle) {
  write_binary_file(path, encode_calibration(bundle));
}

CalibrationBundle read_calibration(const std::filesystem::path& path) {
  return decode_calibration(read_binary_file(path));
}

std::uint16_t ImageEncoding::encode(double db) const noexcept {
  if (!(peak_db > floor_db)) return 0;
  const double t = (db - floor_db) / (peak_db - floor_db);
  return static_cast<std::uint16_t>(std::lround(std::clamp(t, 0.0, 1.0) * 65535.0));
}

double ImageEncoding::decode(std::uint16_t code) const noexcept {
  return floor_db + (peak_db - floor_db) * double(code) / 65535.0;
}

void write_gray16_png(const std::filesystem::path& path, std::size_t width, std::size_t height,
                      const std::vector<std::uint16_t>& codes) {
  if (codes.size() != width * height) throw ValidationError("codes", "size does not match image");
  if (width == 0 || height == 0) throw ValidationError("image", "empty image");
  std::vector<std::uint8_t> rows(codes.size() * 2);
  for (std::size_t i = 0; i < codes.size(); ++i) {
    rows[2 * i] = std::uint8_t(codes[i] >> 8);
    rows[2 * i + 1] = std::uint8_t(codes[i] & 0xFF);
  }
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  std::FILE* fp = std::fopen(tmp.c_str(), "wb");
  if (fp == nullptr) throw FormatError("cannot open " + tmp.string() + " for writing");
  const bool ok = png_write_gray16(fp, width, height, rows.data());
  std::fclose(fp);
  if (!ok) {
    std::filesystem::remove(tmp);
    throw FormatError("failed to encode PNG " + path.string());
  }
  std::filesystem::rename(tmp, path);
}

std::vector<std::uint16_t> read_gray16_png(const std::filesystem::path& path, std::size_t* width,
                                           std::size_t* height) {
  std::FILE* fp = std::fopen(path.c_str(), "rb");
  if (fp == nullptr) throw FormatError("cannot open " + path.string());
  PngHeader header;
  std::vector<std::uint8_t> rows;
  const bool ok = png_read_gray(fp, &header, &rows);
  std::fclose(fp);
  if (!ok) throw FormatError(path.string() + ": not an 8/16-bit grayscale PNG");
  const std::size_t n = std::size_t(header.width) * header.height;
  std::vector<std::uint16_t> codes(n);
  for (std::size_t i = 0; i < n; ++i)
    codes[i] = header.bit_depth == 16 ? std::uint16_t((rows[2 * i] << 8) | rows[2 * i + 1])
                                      : std::uint16_t(rows[i] * 257);
  if (width) *width = header.width;
  if (height) *height = header.height;
  return codes;
}

ImageEncoding write_image_png(const std::filesystem::path& path, const RadarImage& db_image,
                              double floor_db) {
  ImageEncoding enc;
  enc.floor_db = floor_db;
  enc.peak_db = floor_db;
  for (double v : db_image.pixels) enc.peak_db = std::max(enc.peak_db, v);
  enc.azimuth_column_offset = db_image.n_azimuth / 2;

  const std::size_t w = db_image.n_azimuth;
  const std::size_t h = db_image.n_range;
  std::vector<std::uint16_t> codes(w * h);
  for (std::size_t row = 0; row < h; ++row) {
    const std::size_t r = h - 1 - row;
    for (std::size_t col = 0; col < w; ++col) {
      const std::size_t a = (col + w - enc.azimuth_column_offset) % w;
      codes[row * w + col] = enc.encode(db_image(r, a));
    }
  }
  write_gray16_png(path, w, h, codes);

  json side{{"floor_db", enc.floor_db},
            {"peak_db", enc.peak_db},
            {"n_range", h},
            {"n_azimuth", w},
            {"azimuth_column_offset", enc.azimuth_column_offset},
            {"row_to_range_bin", "n_range - 1 - row"},
            {"column_to_signed_azimuth_bin", "column - azimuth_column_offset"},
            {"code_to_db", "floor_db + (peak_db - floor_db) * code / 65535"}};
  write_text_file(path.string() + ".json", side.dump(2) + "\n");
  return enc;
}

RadarImage read_image_png(const std::filesystem::path& path, ImageEncoding* encoding) {
  const json side = parse_json(read_text_file(path.string() + ".json"), "image sidecar");
  ImageEncoding enc;
  try {
    enc.floor_db = side.at("floor_db").get<double>();
    enc.peak_db = side.at("peak_db").get<double>();
    enc.azimuth_column_offset = side.at("azimuth_column_offset").get<std::size_t>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("image sidecar: ") + e.what());
  }
  std::size_t w = 0, h = 0;
  const auto codes = read_gray16_png(path, &w, &h);
  RadarImage img(h, w);
  for (std::size_t row = 0; row < h; ++row)
    for (std::size_t col = 0; col < w; ++col)
      img(h - 1 - row, (col + w - enc.azimuth_column_offset % w) % w) =
          enc.decode(codes[row * w + col]);
  if (encoding) *encoding = enc;
  return img;
}

FrameAnnotations make_annotations(const AnnotatedScene& scene, const RadarConfig& cfg,
                                  std::size_t frame) {
  FrameAnnotations out;
  out.frame = frame;
  out.seed = scene.seed;
  for (std::size_t i = 0; i < scene.objects.size(); ++i) {
    Annotation a;
    a.class_label = scene.objects[i].class_label;
    a.box = scene.boxes.at(i);
    a.range_min_m = double(a.box.r0) * cfg.range_resolution;
    a.range_max_m = double(a.box.r1) * cfg.range_resolution;
    a.azimuth_min_deg = azimuth_deg_of_bin(a.box.a0, cfg.n_azimuth);
    a.azimuth_max_deg = azimuth_deg_of_bin(a.box.a1, cfg.n_azimuth);
    out.objects.push_back(a);
  }
  return out;
}

std::string annotations_to_json(const FrameAnnotations& a) {
  json objects = json::array();
  for (const auto& o : a.objects)
    objects.push_back({{"class", std::string(to_string(o.class_label))},
                       {"box_bins", box_json(o.box)},
                       {"box_physical",
                        {{"range_min_m", o.range_min_m},
                         {"range_max_m", o.range_max_m},
                         {"azimuth_min_deg", o.azimuth_min_deg},
                         {"azimuth_max_deg", o.azimuth_max_deg}}}});
  json doc{{"frame", a.frame}, {"seed", a.seed}, {"count", a.objects.size()}, {"objects", objects}};
  return doc.dump(2) + "\n";
}

FrameAnnotations annotations_from_json(std::string_view text) {
  const json doc = parse_json(text, "annotations");
  FrameAnnotations a;
  try {
    a.frame = doc.at("frame").get<std::size_t>();
    a.seed = doc.at("seed").get<std::uint64_t>();
    for (const auto& o : doc.at("objects")) {
      Annotation ann;
      ann.class_label = parse_object_class(o.at("class").get<std::string>());
      ann.box = box_from(o.at("box_bins"));
      const auto& p = o.at("box_physical");
      ann.range_min_m = p.at("range_min_m").get<double>();
      ann.range_max_m = p.at("range_max_m").get<double>();
      ann.azimuth_min_deg = p.at("azimuth_min_deg").get<double>();
      ann.azimuth_max_deg = p.at("azimuth_max_deg").get<double>();
      a.objects.push_back(ann);
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("annotations: ") + e.what());
  }
  return a;
}

std::string scene_to_json(const AnnotatedScene& scene) {
  json objects = json::array();
  for (std::size_t i = 0; i < scene.objects.size(); ++i) {
    const auto& o = scene.objects[i];
    json points = json::array();
    for (const auto& p : o.points)
      points.push_back({{"range_m", p.range_m},
                        {"radial_velocity_mps", p.radial_velocity_mps},
                        {"azimuth_rad", p.azimuth_rad},
                        {"amplitude_re", p.amplitude.real()},
                        {"amplitude_im", p.amplitude.imag()}});
    json obj{{"class", std::string(to_string(o.class_label))},
             {"center_range_m", o.center_range_m},
             {"center_azimuth_rad", o.center_azimuth_rad},
             {"depth_m", o.depth_m},
             {"cross_m", o.cross_m},
             {"radial_velocity_mps", o.radial_velocity_mps},
             {"rcs_dbsm", o.rcs_dbsm},
             {"points", points}};
    if (i < scene.boxes.size()) obj["box_bins"] = box_json(scene.boxes[i]);
    objects.push_back(obj);
  }
  json doc{{"seed", scene.seed}, {"objects", objects}};
  return doc.dump(2) + "\n";
}

AnnotatedScene scene_from_json(std::string_view text) {
  const json doc = parse_json(text, "scene");
  AnnotatedScene scene;
  try {
    scene.seed = doc.at("seed").get<std::uint64_t>();
    for (const auto& o : doc.at("objects")) {
      SceneObject obj;
      obj.class_label = parse_object_class(o.at("class").get<std::string>());
      obj.center_range_m = o.at("center_range_m").get<double>();
      obj.center_azimuth_rad = o.at("center_azimuth_rad").get<double>();
      obj.depth_m = o.at("depth_m").get<double>();
      obj.cross_m = o.at("cross_m").get<double>();
      obj.radial_velocity_mps = o.at("radial_velocity_mps").get<double>();
      obj.rcs_dbsm = o.at("rcs_dbsm").get<double>();
      for (const auto& p : o.at("points")) {
        ReflectionPoint rp;
        rp.range_m = p.at("range_m").get<double>();
        rp.radial_velocity_mps = p.at("radial_velocity_mps").get<double>();
        rp.azimuth_rad = p.at("azimuth_rad").get<double>();
        rp.amplitude = {p.at("amplitude_re").get<double>(), p.at("amplitude_im").get<double>()};
        obj.points.push_back(rp);
      }
      if (o.contains("box_bins")) scene.boxes.push_back(box_from(o.at("box_bins")));
      scene.objects.push_back(std::move(obj));
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("scene: ") + e.what());
  }
  if (!scene.boxes.empty() && scene.boxes.size() != scene.objects.size())
    throw FormatError("scene: some objects lack boxes");
  return scene;
}

std::string scene_spec_to_json(const SceneSpec& spec) {
  json doc{{"n_cars", spec.n_cars},
           {"n_poles", spec.n_poles},
           {"clutter_density", spec.clutter_density},
           {"range_min_m", spec.range_min_m},
           {"range_max_m", spec.range_max_m},
           {"velocity_min_mps", spec.velocity_min_mps},
           {"velocity_max_mps", spec.velocity_max_mps},
           {"seed", spec.seed}};
  return doc.dump(2) + "\n";
}

SceneSpec scene_spec_from_json(std::string_view text, const SceneSpec& base) {
  const json doc = parse_json(text, "scene spec");
  if (!doc.is_object()) throw FormatError("scene spec: expected an object");
  SceneSpec s = base;
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "n_cars") s.n_cars = value.get<std::size_t>();
      else if (key == "n_poles") s.n_poles = value.get<std::size_t>();
      else if (key == "clutter_density") s.clutter_density = value.get<double>();
      else if (key == "range_min_m") s.range_min_m = value.get<double>();
      else if (key == "range_max_m") s.range_max_m = value.get<double>();
      else if (key == "velocity_min_mps") s.velocity_min_mps = value.get<double>();
      else if (key == "velocity_max_mps") s.velocity_max_mps = value.get<double>();
      else if (key == "seed") s.seed = value.get<std::uint64_t>();
      else throw ValidationError(key, "unknown scene spec field");
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("scene spec: ") + e.what());
  }
  return s;
}

std::string equivalence_to_json(const EquivalenceReport& r) {
  json doc{{"full_error", r.full_error},
           {"truncated_error", r.truncated_error},
           {"max_deviation_truncated", r.max_deviation_truncated},
           {"noise_sigma", r.noise_sigma},
           {"retained_energy_fraction", r.retained_energy_fraction},
           {"truncated_window",
            {r.truncated_window.range, r.truncated_window.doppler, r.truncated_window.azimuth}},
           {"n_points", r.n_points}};
  return doc.dump(2) + "\n";
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  write_binary_file(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

void write_binary_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot open " + tmp.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!out) throw FormatError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

}  // namespace radsim
