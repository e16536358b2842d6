#include <glob.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "radsim/bench.hpp"
#include "radsim/config.hpp"
#include "radsim/conventional.hpp"
#include "radsim/errors.hpp"
#include "radsim/fast_sim.hpp"
#include "radsim/imaging.hpp"
#include "radsim/io.hpp"
#include "radsim/noise.hpp"
#include "radsim/psf.hpp"
#include "radsim/scene.hpp"

namespace fs = std::filesystem;
using namespace radsim;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCalibration = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigArgs {
  std::string preset = "raddet-ti";
  std::string config_file;
  std::optional<std::uint64_t> seed;
  std::optional<double> noise_variance;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--preset", preset, "raddet-ti or desk-small")->capture_default_str();
    cmd->add_option("--config", config_file, "JSON config overlaid on the preset");
    cmd->add_option("--seed", seed, "RNG seed (overrides RADSIM_SEED and the config)");
    cmd->add_option("--noise-variance", noise_variance, "Tensor-domain noise variance");
  }

  // Precedence: flags > RADSIM_SEED (seed only) > config file > preset.
  RadarConfig resolve() const {
    RadarConfig cfg = make_preset(preset);
    if (!config_file.empty()) cfg = load_config(config_file, cfg);
    if (const char* env = std::getenv("RADSIM_SEED"); env != nullptr && *env != '\0') {
      try {
        std::size_t used = 0;
        cfg.rng_seed = std::stoull(env, &used);
        if (used != std::string(env).size()) throw std::invalid_argument(env);
      } catch (const std::exception&) {
        throw UsageError(std::string("RADSIM_SEED is not an unsigned integer: ") + env);
      }
    }
    if (seed) cfg.rng_seed = *seed;
    if (noise_variance) cfg.noise_variance = *noise_variance;
    validate(cfg);
    return cfg;
  }
};

std::string frame_stem(std::size_t frame) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%04zu", frame);
  return buf;
}

// --- simulate ---------------------------------------------------------------

struct SimulateArgs {
  ConfigArgs config;
  std::string scene_file;
  std::size_t cars = 3;
  std::size_t poles = 4;
  double clutter = 0.4;
  std::optional<double> range_min, range_max;
  std::optional<double> corner_range;
  std::string pipeline = "fast";
  std::size_t frames = 1;
  std::string out = "radsim_out";
  std::string psf_file;
  double energy = 0.99;
  std::string placement = "nearest";
  bool no_noise = false;
  unsigned jobs = 1;
  double floor_db = -120.0;
};

SceneSpec resolve_scene_spec(const SimulateArgs& a, std::uint64_t seed) {
  SceneSpec spec;
  spec.n_cars = a.cars;
  spec.n_poles = a.poles;
  spec.clutter_density = a.clutter;
  if (!a.scene_file.empty()) spec = scene_spec_from_json(read_text_file(a.scene_file), spec);
  if (a.range_min) spec.range_min_m = *a.range_min;
  if (a.range_max) spec.range_max_m = *a.range_max;
  spec.seed = seed;
  return spec;
}

AnnotatedScene corner_scene(double range_m, const RadarConfig& cfg) {
  SceneObject o;
  o.class_label = ObjectClass::Pole;
  o.center_range_m = range_m;
  o.points.push_back({range_m, 0.0, 0.0, Complex{1.0, 0.0}});
  validate_point(o.points[0], cfg);
  AnnotatedScene scene;
  scene.seed = cfg.rng_seed;
  scene.boxes.push_back(bounding_box(o, cfg));
  scene.objects.push_back(std::move(o));
  return scene;
}

struct PendingFile {
  std::string name;
  std::vector<std::uint8_t> bytes;
};

// Everything for one frame is rendered to a staging directory first, then moved
// into place, so an error never leaves a partial frame behind.
void commit_frame(const fs::path& out, const fs::path& staging) {
  for (const auto& entry : fs::directory_iterator(staging))
    fs::rename(entry.path(), out / entry.path().filename());
  fs::remove(staging);
}

void write_frame_image(const fs::path& path, const RadarTensor& t, double floor_db) {
  write_image_png(path, to_decibels(tensor_to_image(t), floor_db), floor_db);
}

int run_simulate(const SimulateArgs& a) {
  RadarConfig cfg = a.config.resolve();
  const bool fast = a.pipeline == "fast" || a.pipeline == "both";
  const bool conventional = a.pipeline == "conventional" || a.pipeline == "both";
  const Placement placement = a.placement == "splat" ? Placement::Splat : Placement::Nearest;

  Psf psf;
  if (fast) {
    if (!a.psf_file.empty()) {
      const CalibrationBundle bundle = read_calibration(a.psf_file);
      psf = calibrate_psf_gain(bundle.psf, cfg);
      if (!a.config.noise_variance) cfg.noise_variance = bundle.noise_variance;
    } else {
      psf = truncate_psf(analytic_psf(cfg), a.energy);
    }
  }

  const std::uint64_t base_seed = cfg.rng_seed;
  // Fail on infeasible scenes before anything is written.
  std::vector<AnnotatedScene> scenes;
  for (std::size_t f = 0; f < a.frames; ++f) {
    const std::uint64_t seed = derive_seed(base_seed, 1000 + f);
    RadarConfig frame_cfg = cfg;
    frame_cfg.rng_seed = seed;
    AnnotatedScene scene = a.corner_range ? corner_scene(*a.corner_range, frame_cfg)
                                          : generate_scene(resolve_scene_spec(a, seed), frame_cfg);
    if (!a.corner_range) scene = assign_amplitudes(std::move(scene), frame_cfg);
    scenes.push_back(std::move(scene));
  }

  const fs::path out(a.out);
  fs::create_directories(out);
  nlohmann::json manifest{{"config", nlohmann::json::parse(config_to_json(cfg))},
                          {"pipeline", a.pipeline},
                          {"frames", a.frames},
                          {"seed", base_seed},
                          {"noise", !a.no_noise},
                          {"placement", a.placement}};
  if (fast)
    manifest["psf"] = {{"source", a.psf_file.empty() ? "analytic" : a.psf_file},
                       {"window", {psf.window.range, psf.window.doppler, psf.window.azimuth}},
                       {"retained_energy_fraction", psf.retained_energy_fraction}};
  if (a.corner_range)
    manifest["scene"] = {{"corner_range_m", *a.corner_range}};
  else
    manifest["scene"] = nlohmann::json::parse(scene_spec_to_json(resolve_scene_spec(a, base_seed)));
  write_text_file(out / "run.json", manifest.dump(2) + "\n");

  for (std::size_t f = 0; f < a.frames; ++f) {
    const AnnotatedScene& scene = scenes[f];
    RadarConfig frame_cfg = cfg;
    frame_cfg.rng_seed = scene.seed;
    const auto points = scene.all_points();
    const std::string stem = frame_stem(f);
    const fs::path staging = out / (".staging_" + stem);
    fs::remove_all(staging);
    fs::create_directories(staging);
    try {
      std::optional<RadarTensor> fast_t, conv_t;
      if (fast) {
        fast_t = simulate_fast(points, psf, frame_cfg,
                               {.add_noise = !a.no_noise, .placement = placement, .workers = a.jobs});
        write_tensor(staging / (stem + "_fast.rsr"), *fast_t);
        write_frame_image(staging / (stem + "_fast.png"), *fast_t, a.floor_db);
      }
      if (conventional) {
        conv_t = simulate_conventional(points, frame_cfg, !a.no_noise);
        write_tensor(staging / (stem + "_conventional.rsr"), *conv_t);
        write_frame_image(staging / (stem + "_conventional.png"), *conv_t, a.floor_db);
      }
      if (fast && conventional) {
        const EquivalenceReport rep = equivalence_report(points, frame_cfg, a.energy);
        auto doc = nlohmann::json::parse(equivalence_to_json(rep));
        doc["frame_distance"] = {
            {"relative_frobenius", relative_frobenius_distance(*fast_t, *conv_t)},
            {"max_abs_deviation", max_abs_deviation(*fast_t, *conv_t)}};
        write_text_file(staging / (stem + "_equivalence.json"), doc.dump(2) + "\n");
      }
      write_text_file(staging / (stem + "_annotations.json"),
                      annotations_to_json(make_annotations(scene, frame_cfg, f)));
      write_text_file(staging / (stem + "_scene.json"), scene_to_json(scene));
    } catch (...) {
      fs::remove_all(staging);
      throw;
    }
    commit_frame(out, staging);
  }
  std::cout << "wrote " << a.frames << " frame(s) to " << out.string() << "\n";
  return 0;
}

// --- calibrate --------------------------------------------------------------

struct CalibrateArgs {
  ConfigArgs config;
  std::string frames_glob;
  double energy = 0.99;
  std::optional<double> noise_floor;
  bool magnitude = false;
  std::string out;
};

std::vector<std::string> expand_glob(const std::string& pattern) {
  glob_t g{};
  const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
  std::vector<std::string> paths;
  if (rc == 0)
    for (std::size_t i = 0; i < g.gl_pathc; ++i) paths.emplace_back(g.gl_pathv[i]);
  globfree(&g);
  if (paths.empty()) throw UsageError("no files match '" + pattern + "'");
  return paths;  // glob sorts
}

int run_calibrate(const CalibrateArgs& a) {
  std::vector<RadarTensor> frames;
  for (const auto& p : expand_glob(a.frames_glob)) frames.push_back(read_tensor(p));

  RadarConfig cfg = a.config.resolve();
  const Dims d = frames.front().dims();
  if (d != cfg.dims()) {
    // Frames define the grid; the rest of the config is irrelevant to measurement.
    cfg.n_range = d.range;
    cfg.n_doppler = d.doppler;
    cfg.n_azimuth = d.azimuth;
  }

  MeasureOptions options;
  options.truncation.energy_fraction = a.energy;
  options.magnitude_average = a.magnitude;
  if (a.noise_floor) {
    options.truncation.mode = TruncationMode::NoiseFloor;
    options.truncation.floor_magnitude = *a.noise_floor;
  }

  CalibrationBundle bundle;
  bundle.psf = measure_psf(frames, cfg, options);
  double noise = 0.0;
  for (const auto& f : frames) noise += estimate_noise_variance(f);
  bundle.noise_variance = noise / double(frames.size());
  bundle.frames_averaged = frames.size();
  write_calibration(a.out, bundle);

  nlohmann::json doc{{"frames", frames.size()},
                     {"window", {bundle.psf.window.range, bundle.psf.window.doppler,
                                 bundle.psf.window.azimuth}},
                     {"retained_energy_fraction", bundle.psf.retained_energy_fraction},
                     {"noise_variance", bundle.noise_variance},
                     {"out", a.out}};
  std::cout << doc.dump(2) << "\n";
  return 0;
}

// --- bench ------------------------------------------------------------------

struct BenchArgs {
  ConfigArgs config;
  std::size_t points = 200;
  std::size_t repetitions = 5;
  double energy = 0.99;
  std::string psf = "measured";
  std::uint64_t scene_seed = 1;
  bool no_timings = false;
  std::string out;
};

int run_bench(const BenchArgs& a) {
  const RadarConfig cfg = a.config.resolve();
  BenchmarkOptions opt;
  opt.n_points = a.points;
  opt.repetitions = a.repetitions;
  opt.energy_fraction = a.energy;
  opt.psf = a.psf == "analytic" ? BenchPsf::Analytic : BenchPsf::Measured;
  opt.scene_seed = a.scene_seed;
  const ComplexityReport r = run_benchmark(cfg, opt);
  const std::string doc = complexity_to_json(r, !a.no_timings);
  if (!a.out.empty()) write_text_file(a.out, doc);
  std::cout << doc;
  return 0;
}

// --- render -----------------------------------------------------------------

struct RenderArgs {
  ConfigArgs config;
  std::string in;
  std::string out;
  double floor_db = -120.0;
  std::optional<double> cartesian_pixel;
};

int run_render(const RenderArgs& a) {
  RadarImage db;
  double floor_db = a.floor_db;
  if (fs::path(a.in).extension() == ".png") {
    ImageEncoding enc;
    db = read_image_png(a.in, &enc);
    floor_db = enc.floor_db;
  } else {
    db = to_decibels(tensor_to_image(read_tensor(a.in)), floor_db);
  }

  if (!a.cartesian_pixel) {
    write_image_png(a.out, db, floor_db);
  } else {
    RadarConfig cfg = a.config.resolve();
    if (cfg.n_range != db.n_range || cfg.n_azimuth != db.n_azimuth)
      throw ValidationError("preset", "image dimensions do not match the config");
    // Resample linear magnitudes, then map to dB codes; outside the wedge stays 0.
    RadarImage lin(db.n_range, db.n_azimuth);
    for (std::size_t i = 0; i < db.pixels.size(); ++i)
      lin.pixels[i] = std::pow(10.0, db.pixels[i] / 20.0);
    const CartesianRaster raster = polar_to_cartesian(lin, cfg, *a.cartesian_pixel);
    ImageEncoding enc{floor_db, floor_db, 0};
    for (double v : db.pixels) enc.peak_db = std::max(enc.peak_db, v);
    std::vector<std::uint16_t> codes(raster.values.size(), 0);
    for (std::size_t i = 0; i < codes.size(); ++i)
      if (raster.valid[i])
        codes[i] = enc.encode(20.0 * std::log10(std::max(raster.values[i], 1e-300)));
    write_gray16_png(a.out, raster.width, raster.height, codes);
    nlohmann::json side{{"floor_db", enc.floor_db},
                        {"peak_db", enc.peak_db},
                        {"pixel_m", raster.pixel_m},
                        {"width", raster.width},
                        {"height", raster.height},
                        {"x_of_column_m", "(column + 0.5) * pixel_m - width * pixel_m / 2"},
                        {"y_of_row_m", "(height - 1 - row + 0.5) * pixel_m"},
                        {"code_to_db", "floor_db + (peak_db - floor_db) * code / 65535"}};
    write_text_file(a.out + ".json", side.dump(2) + "\n");
  }
  std::cout << "wrote " << a.out << "\n";
  return 0;
}

// --- equivalence ------------------------------------------------------------

struct EquivalenceArgs {
  std::string a, b, out;
};

int run_equivalence(const EquivalenceArgs& e) {
  const RadarTensor ta = read_tensor(e.a);
  const RadarTensor tb = read_tensor(e.b);
  if (ta.dims() != tb.dims()) throw ValidationError("dims", "tensors have different shapes");
  nlohmann::json doc{{"a", e.a},
                     {"b", e.b},
                     {"dims", {ta.dims().range, ta.dims().doppler, ta.dims().azimuth}},
                     {"relative_frobenius", relative_frobenius_distance(ta, tb)},
                     {"max_abs_deviation", max_abs_deviation(ta, tb)},
                     {"energy_a", ta.energy()},
                     {"energy_b", tb.energy()}};
  const std::string text = doc.dump(2) + "\n";
  if (!e.out.empty()) write_text_file(e.out, text);
  std::cout << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radar tensor simulator: conventional and PSF-convolution pipelines"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate annotated frames");
  sim.config.add_to(simulate);
  simulate->add_option("--scene", sim.scene_file, "Scene spec JSON (n_cars, n_poles, ...)");
  simulate->add_option("--cars", sim.cars, "Cars per frame")->capture_default_str();
  simulate->add_option("--poles", sim.poles, "Poles per frame")->capture_default_str();
  simulate->add_option("--clutter", sim.clutter, "Clutter points per metre of range span")
      ->capture_default_str();
  simulate->add_option("--range-min", sim.range_min, "Nearest object range (m)");
  simulate->add_option("--range-max", sim.range_max, "Farthest object range (m)");
  simulate->add_option("--corner-range", sim.corner_range,
                       "Replace the scene with one unit corner reflector at this range (m)");
  simulate->add_option("--pipeline", sim.pipeline)
      ->check(CLI::IsMember({"fast", "conventional", "both"}))
      ->capture_default_str();
  simulate->add_option("--frames", sim.frames)->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_option("--out", sim.out, "Output directory")->capture_default_str();
  simulate->add_option("--psf", sim.psf_file, "Calibration bundle for the fast pipeline");
  simulate->add_option("--energy", sim.energy, "PSF retained-energy fraction")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  simulate->add_option("--placement", sim.placement)
      ->check(CLI::IsMember({"nearest", "splat"}))
      ->capture_default_str();
  simulate->add_flag("--no-noise", sim.no_noise, "Skip noise");
  simulate->add_option("--jobs", sim.jobs, "Worker threads for the fast pipeline")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--floor-db", sim.floor_db, "Image floor (dB)")->capture_default_str();

  CalibrateArgs cal;
  auto* calibrate = app.add_subcommand("calibrate", "Measure a PSF from corner-reflector frames");
  cal.config.add_to(calibrate);
  calibrate->add_option("--frames", cal.frames_glob, "Glob of tensor files")->required();
  calibrate->add_option("--energy", cal.energy)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  calibrate->add_option("--noise-floor", cal.noise_floor,
                        "Truncate at this normalized magnitude instead of by energy");
  calibrate->add_flag("--magnitude-average", cal.magnitude, "Average magnitudes, not complex values");
  calibrate->add_option("--out", cal.out, "Calibration bundle path")->required();

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time both pipelines on one scene");
  bench.config.add_to(bench_cmd);
  bench_cmd->add_option("--points", bench.points)->capture_default_str();
  bench_cmd->add_option("--repetitions", bench.repetitions)
      ->check(CLI::Range(std::size_t{3}, std::size_t{1000}))
      ->capture_default_str();
  bench_cmd->add_option("--energy", bench.energy)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  bench_cmd->add_option("--psf", bench.psf)
      ->check(CLI::IsMember({"analytic", "measured"}))
      ->capture_default_str();
  bench_cmd->add_option("--scene-seed", bench.scene_seed)->capture_default_str();
  bench_cmd->add_flag("--no-timings", bench.no_timings, "Omit timing fields from the report");
  bench_cmd->add_option("--out", bench.out, "Also write the report here");

  RenderArgs render;
  auto* render_cmd = app.add_subcommand("render", "Render a tensor or image file to PNG");
  render.config.add_to(render_cmd);
  render_cmd->add_option("--in", render.in, "Tensor (.rsr) or image (.png)")->required();
  render_cmd->add_option("--out", render.out, "PNG path")->required();
  render_cmd->add_option("--floor-db", render.floor_db)->capture_default_str();
  render_cmd->add_option("--cartesian", render.cartesian_pixel,
                         "Resample to x-y with this pixel size (m)");

  EquivalenceArgs eq;
  auto* eq_cmd = app.add_subcommand("equivalence", "Compare two tensor files");
  eq_cmd->add_option("--a", eq.a)->required();
  eq_cmd->add_option("--b", eq.b)->required();
  eq_cmd->add_option("--out", eq.out, "Also write the report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim);
    if (calibrate->parsed()) return run_calibrate(cal);
    if (bench_cmd->parsed()) return run_bench(bench);
    if (render_cmd->parsed()) return run_render(render);
    if (eq_cmd->parsed()) return run_equivalence(eq);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CalibrationError& e) {
    std::cerr << "calibration failed: " << e.what() << "\n";
    return kExitCalibration;
  } catch (const ValidationError& e) {
    std::cerr << "invalid " << e.field() << ": " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
