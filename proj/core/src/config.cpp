#include "radsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "radsim/errors.hpp"

namespace radsim {

using nlohmann::json;

std::string_view to_string(Taper taper) {
  switch (taper) {
    case Taper::Rectangular: return "rectangular";
    case Taper::Hann: return "hann";
    case Taper::Hamming: return "hamming";
  }
  return "rectangular";
}

Taper parse_taper(std::string_view name) {
  if (name == "rectangular" || name == "rect" || name == "none") return Taper::Rectangular;
  if (name == "hann") return Taper::Hann;
  if (name == "hamming") return Taper::Hamming;
  throw ValidationError("taper", "unknown taper '" + std::string(name) + "'");
}

void validate(const RadarConfig& cfg) {
  auto require = [](bool ok, const char* field, const char* msg) {
    if (!ok) throw ValidationError(field, msg);
  };
  require(cfg.n_range >= 2, "n_range", "must be >= 2");
  require(cfg.n_doppler >= 2, "n_doppler", "must be >= 2");
  require(cfg.n_azimuth >= 2, "n_azimuth", "must be >= 2");
  require(std::isfinite(cfg.carrier_wavelength) && cfg.carrier_wavelength > 0,
          "carrier_wavelength", "must be finite and > 0");
  require(std::isfinite(cfg.range_resolution) && cfg.range_resolution > 0, "range_resolution",
          "must be finite and > 0");
  require(std::isfinite(cfg.pulse_repetition_interval) && cfg.pulse_repetition_interval > 0,
          "pulse_repetition_interval", "must be finite and > 0");
  require(std::isfinite(cfg.noise_variance) && cfg.noise_variance >= 0, "noise_variance",
          "must be finite and >= 0");
  require(std::isfinite(cfg.reference_range_m) && cfg.reference_range_m > 0,
          "reference_range_m", "must be finite and > 0");
}

std::size_t min_elements_for_beamwidth(double beamwidth_rad) {
  if (!(beamwidth_rad > 0)) throw ValidationError("beamwidth", "must be > 0");
  auto n = static_cast<std::size_t>(std::ceil(2.0 / beamwidth_rad));
  // ceil may land one high when 2/bw is an exact integer plus rounding noise
  while (n > 1 && 2.0 / double(n - 1) <= beamwidth_rad) --n;
  return n;
}

RadarConfig make_preset(std::string_view name) {
  constexpr double kCarrierHz = 77e9;
  RadarConfig cfg;
  cfg.carrier_wavelength = kSpeedOfLight / kCarrierHz;
  cfg.pulse_repetition_interval = 60e-6;
  cfg.noise_variance = 1.0;
  cfg.rng_seed = 0;
  cfg.reference_range_m = 25.0;
  if (name == "raddet-ti") {
    cfg.range_resolution = 0.28;
    cfg.n_azimuth = min_elements_for_beamwidth(3.9 * std::numbers::pi / 180.0);
    cfg.n_range = 256;
    cfg.n_doppler = 64;
    cfg.range_window = Taper::Hann;
    cfg.doppler_window = Taper::Hann;
    cfg.azimuth_window = Taper::Rectangular;
  } else if (name == "desk-small") {
    cfg.range_resolution = 0.5;
    cfg.n_range = 64;
    cfg.n_doppler = 32;
    cfg.n_azimuth = 32;
  } else {
    throw ValidationError("preset", "unknown preset '" + std::string(name) + "'");
  }
  return cfg;
}

namespace {

json to_json_object(const RadarConfig& cfg) {
  return json{
      {"n_range", cfg.n_range},
      {"n_doppler", cfg.n_doppler},
      {"n_azimuth", cfg.n_azimuth},
      {"carrier_wavelength", cfg.carrier_wavelength},
      {"range_resolution", cfg.range_resolution},
      {"pulse_repetition_interval", cfg.pulse_repetition_interval},
      {"noise_variance", cfg.noise_variance},
      {"rng_seed", cfg.rng_seed},
      {"range_window", std::string(to_string(cfg.range_window))},
      {"doppler_window", std::string(to_string(cfg.doppler_window))},
      {"azimuth_window", std::string(to_string(cfg.azimuth_window))},
      {"reference_range_m", cfg.reference_range_m},
  };
}

}  // namespace

std::string config_to_json(const RadarConfig& cfg) { return to_json_object(cfg).dump(2) + "\n"; }

RadarConfig config_from_json(std::string_view text, const RadarConfig& base) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("config: expected an object");

  static const char* const kKnown[] = {
      "n_range",        "n_doppler",         "n_azimuth",          "carrier_wavelength",
      "range_resolution", "pulse_repetition_interval", "noise_variance", "rng_seed",
      "range_window",   "doppler_window",    "azimuth_window",     "reference_range_m"};
  for (const auto& [key, _] : doc.items()) {
    if (std::find(std::begin(kKnown), std::end(kKnown), key) == std::end(kKnown))
      throw ValidationError(key, "unknown config field");
  }

  RadarConfig cfg = base;
  try {
    if (doc.contains("n_range")) cfg.n_range = doc["n_range"].get<std::size_t>();
    if (doc.contains("n_doppler")) cfg.n_doppler = doc["n_doppler"].get<std::size_t>();
    if (doc.contains("n_azimuth")) cfg.n_azimuth = doc["n_azimuth"].get<std::size_t>();
    if (doc.contains("carrier_wavelength"))
      cfg.carrier_wavelength = doc["carrier_wavelength"].get<double>();
    if (doc.contains("range_resolution"))
      cfg.range_resolution = doc["range_resolution"].get<double>();
    if (doc.contains("pulse_repetition_interval"))
      cfg.pulse_repetition_interval = doc["pulse_repetition_interval"].get<double>();
    if (doc.contains("noise_variance")) cfg.noise_variance = doc["noise_variance"].get<double>();
    if (doc.contains("rng_seed")) cfg.rng_seed = doc["rng_seed"].get<std::uint64_t>();
    if (doc.contains("range_window"))
      cfg.range_window = parse_taper(doc["range_window"].get<std::string>());
    if (doc.contains("doppler_window"))
      cfg.doppler_window = parse_taper(doc["doppler_window"].get<std::string>());
    if (doc.contains("azimuth_window"))
      cfg.azimuth_window = parse_taper(doc["azimuth_window"].get<std::string>());
    if (doc.contains("reference_range_m"))
      cfg.reference_range_m = doc["reference_range_m"].get<double>();
  } catch (const json::type_error& e) {
    throw FormatError(std::string("config: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

void save_config(const std::filesystem::path& path, const RadarConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  out << config_to_json(cfg);
}

RadarConfig load_config(const std::filesystem::path& path, const RadarConfig& base) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str(), base);
}

}  // namespace radsim
