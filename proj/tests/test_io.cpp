#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "radsim/conventional.hpp"
#include "radsim/errors.hpp"
#include "radsim/io.hpp"
#include "radsim/psf.hpp"

using namespace radsim;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("radsim_io_" + std::to_string(std::random_device{}()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

// Random tensor whose values are exactly representable as f32.
RadarTensor random_f32_tensor(Dims d, TensorKind kind, std::uint64_t seed) {
  RadarTensor t(d, kind);
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> g;
  for (auto& c : t.cells()) c = Complex(g(rng), g(rng));
  return t;
}

}  // namespace

TEST(TensorFile, RoundTripIsBitExact) {
  TempDir dir;
  const auto t = random_f32_tensor({7, 3, 5}, TensorKind::Filtered, 1);
  write_tensor(dir.path() / "a.rsr", t);
  const auto back = read_tensor(dir.path() / "a.rsr");
  EXPECT_EQ(back, t);
  const auto raw = random_f32_tensor({2, 2, 2}, TensorKind::RawSignal, 2);
  EXPECT_EQ(decode_tensor(encode_tensor(raw)), raw);
}

TEST(TensorFile, DoubleTensorsStoreAsF32AndThenStayFixed) {
  const auto cfg = make_preset("desk-small");
  const ReflectionPoint p{7.31, 1.2, 0.3, 1.0};
  const auto y = simulate_conventional(std::span(&p, 1), cfg, true);
  const auto bytes = encode_tensor(y);
  EXPECT_EQ(bytes.size(), 7 + 12 + 1 + y.size() * 8);
  const auto once = decode_tensor(bytes);
  EXPECT_LT(relative_frobenius_distance(once, y), 1e-6);
  EXPECT_EQ(encode_tensor(once), bytes);
}

TEST(TensorFile, LayoutIsLittleEndian) {
  RadarTensor t({1, 1, 2}, TensorKind::Filtered);
  t(0, 0, 1) = Complex(1.0, -2.0);
  const auto b = encode_tensor(t);
  ASSERT_EQ(b.size(), 7u + 12u + 1u + 16u);
  EXPECT_EQ(std::string(b.begin(), b.begin() + 7), "RSRTEN1");
  EXPECT_EQ(b[7], 1);
  EXPECT_EQ(b[15], 2);
  EXPECT_EQ(b[19], 1);
  // 1.0f = 0x3F800000, -2.0f = 0xC0000000
  EXPECT_EQ(b[28 + 3], 0x3F);
  EXPECT_EQ(b[32 + 3], 0xC0);
}

TEST(TensorFile, CorruptInputIsAFormatError) {
  auto b = encode_tensor(RadarTensor({2, 2, 2}, TensorKind::Filtered));
  auto bad_magic = b;
  bad_magic[0] = 'X';
  EXPECT_THROW(decode_tensor(bad_magic), FormatError);
  auto short_data = b;
  short_data.pop_back();
  EXPECT_THROW(decode_tensor(short_data), FormatError);
  auto bad_kind = b;
  bad_kind[19] = 7;
  EXPECT_THROW(decode_tensor(bad_kind), FormatError);
  auto trailing = b;
  trailing.push_back(0);
  EXPECT_THROW(decode_tensor(trailing), FormatError);
  EXPECT_THROW(read_tensor("/nonexistent/radsim.rsr"), FormatError);
}

TEST(CalibrationFile, RoundTrip) {
  TempDir dir;
  CalibrationBundle b;
  b.psf.window = {3, 1, 5};
  b.psf.center = {1, 0, 2};
  b.psf.retained_energy_fraction = 0.9912345678;
  b.psf.source = PsfSource::Measured;
  for (int i = 0; i < 15; ++i) b.psf.cells.push_back(Complex(0.5 * i, -0.25 * i));
  b.noise_variance = 0.123456789;
  write_calibration(dir.path() / "cal.bin", b);
  const auto back = read_calibration(dir.path() / "cal.bin");
  EXPECT_EQ(back.psf.window, b.psf.window);
  EXPECT_EQ(back.psf.center, b.psf.center);
  EXPECT_EQ(back.psf.retained_energy_fraction, b.psf.retained_energy_fraction);
  EXPECT_EQ(back.noise_variance, b.noise_variance);
  EXPECT_EQ(back.psf.cells, b.psf.cells);
  const auto bytes = encode_calibration(b);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 7), "RSRCAL1");
  EXPECT_EQ(bytes.size(), 7u + 24u + 16u + 15u * 8u);
}

TEST(CalibrationFile, RejectsBadCenter) {
  CalibrationBundle b;
  b.psf.window = {1, 1, 1};
  b.psf.cells = {1.0};
  auto bytes = encode_calibration(b);
  bytes[7 + 12] = 5;  // center.range
  EXPECT_THROW(decode_calibration(bytes), FormatError);
}

TEST(ImagePng, RoundTripWithinQuantization) {
  TempDir dir;
  RadarImage db(6, 5, -90.0);
  db(0, 0) = 0.0;
  db(5, 4) = -30.0;
  db(2, 2) = -60.5;
  ImageEncoding enc = write_image_png(dir.path() / "img.png", db, -90.0);
  EXPECT_EQ(enc.peak_db, 0.0);
  EXPECT_TRUE(fs::exists(dir.path() / "img.png.json"));
  ImageEncoding read_enc;
  const auto back = read_image_png(dir.path() / "img.png", &read_enc);
  EXPECT_EQ(read_enc.floor_db, -90.0);
  ASSERT_EQ(back.n_range, 6u);
  ASSERT_EQ(back.n_azimuth, 5u);
  const double step = 90.0 / 65535.0;
  for (std::size_t i = 0; i < db.pixels.size(); ++i)
    EXPECT_NEAR(back.pixels[i], db.pixels[i], step / 2 + 1e-12);
}

TEST(ImagePng, FarRangeAtTopAndBroadsideCentered) {
  TempDir dir;
  RadarImage db(4, 8, -100.0);
  db(3, 0) = 0.0;  // far range, azimuth bin 0
  write_image_png(dir.path() / "img.png", db, -100.0);
  std::size_t w = 0, h = 0;
  const auto codes = read_gray16_png(dir.path() / "img.png", &w, &h);
  ASSERT_EQ(w, 8u);
  ASSERT_EQ(h, 4u);
  EXPECT_EQ(codes[0 * w + 4], 65535);
  std::size_t lit = 0;
  for (auto c : codes) lit += c != 0;
  EXPECT_EQ(lit, 1u);
}

TEST(ImagePng, Gray16RoundTrip) {
  TempDir dir;
  std::vector<std::uint16_t> codes = {0, 1, 256, 65535, 1234, 40000};
  write_gray16_png(dir.path() / "g.png", 3, 2, codes);
  std::size_t w = 0, h = 0;
  EXPECT_EQ(read_gray16_png(dir.path() / "g.png", &w, &h), codes);
  EXPECT_THROW(write_gray16_png(dir.path() / "g.png", 2, 2, codes), ValidationError);
}

TEST(ImageEncoding, AffineMap) {
  ImageEncoding e{-100.0, 0.0, 0};
  EXPECT_EQ(e.encode(-100.0), 0);
  EXPECT_EQ(e.encode(0.0), 65535);
  EXPECT_EQ(e.encode(-200.0), 0);
  EXPECT_EQ(e.encode(10.0), 65535);
  EXPECT_DOUBLE_EQ(e.decode(65535), 0.0);
  EXPECT_DOUBLE_EQ(e.decode(0), -100.0);
}

TEST(Annotations, RoundTrip) {
  const auto cfg = make_preset("raddet-ti");
  SceneSpec spec;
  spec.n_cars = 2;
  spec.n_poles = 2;
  spec.clutter_density = 0.2;
  spec.seed = 12;
  const auto scene = generate_scene(spec, cfg);
  const auto ann = make_annotations(scene, cfg, 3);
  EXPECT_EQ(ann.frame, 3u);
  EXPECT_EQ(ann.seed, 12u);
  ASSERT_EQ(ann.objects.size(), scene.objects.size());
  for (std::size_t i = 0; i < ann.objects.size(); ++i) {
    EXPECT_EQ(ann.objects[i].box, scene.boxes[i]);
    EXPECT_DOUBLE_EQ(ann.objects[i].range_min_m, double(scene.boxes[i].r0) * 0.28);
    EXPECT_LT(ann.objects[i].azimuth_min_deg, ann.objects[i].azimuth_max_deg);
  }
  EXPECT_EQ(annotations_from_json(annotations_to_json(ann)), ann);
}

TEST(Annotations, EmptyListIsAValidDocument) {
  FrameAnnotations empty;
  const auto text = annotations_to_json(empty);
  EXPECT_NE(text.find("\"count\": 0"), std::string::npos);
  const auto back = annotations_from_json(text);
  EXPECT_TRUE(back.objects.empty());
  EXPECT_THROW(annotations_from_json("{"), FormatError);
}

TEST(SceneDocument, RoundTrip) {
  const auto cfg = make_preset("raddet-ti");
  SceneSpec spec;
  spec.n_cars = 2;
  spec.n_poles = 1;
  spec.seed = 4;
  const auto scene = assign_amplitudes(generate_scene(spec, cfg), cfg);
  const auto back = scene_from_json(scene_to_json(scene));
  EXPECT_EQ(back.seed, scene.seed);
  EXPECT_EQ(back.boxes, scene.boxes);
  const auto a = scene.all_points(), b = back.all_points();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].range_m, b[i].range_m);
    EXPECT_EQ(a[i].azimuth_rad, b[i].azimuth_rad);
    EXPECT_EQ(a[i].radial_velocity_mps, b[i].radial_velocity_mps);
    EXPECT_EQ(a[i].amplitude, b[i].amplitude);
  }
  EXPECT_EQ(scene_to_json(back), scene_to_json(scene));
}

TEST(SceneSpecDocument, OverlaysOntoABase) {
  SceneSpec base;
  base.n_cars = 5;
  const auto s = scene_spec_from_json(R"({"n_poles": 3, "seed": 9})", base);
  EXPECT_EQ(s.n_cars, 5u);
  EXPECT_EQ(s.n_poles, 3u);
  EXPECT_EQ(s.seed, 9u);
  const auto round = scene_spec_from_json(scene_spec_to_json(s));
  EXPECT_EQ(round.n_cars, 5u);
  EXPECT_EQ(round.range_max_m, s.range_max_m);
  EXPECT_THROW(scene_spec_from_json(R"({"n_trucks": 1})"), ValidationError);
}

TEST(TextFiles, AtomicWriteLeavesNoTemporary) {
  TempDir dir;
  write_text_file(dir.path() / "x.json", "{}\n");
  EXPECT_EQ(read_text_file(dir.path() / "x.json"), "{}\n");
  EXPECT_FALSE(fs::exists(dir.path() / "x.json.tmp"));
}
