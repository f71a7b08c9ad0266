#include "ifgi/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "ifgi/errors.hpp"

namespace ifgi {

std::string format_double(double v) {
  char buf[40];
  for (const int precision : {15, 16, 17}) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

PolarizedAmplitude parse_polarization(const std::string& text) {
  if (text == "H") return PolarizedAmplitude::horizontal();
  if (text == "V") return PolarizedAmplitude::vertical();
  if (text == "D") return PolarizedAmplitude::diagonal();
  if (text == "A") return PolarizedAmplitude::antidiagonal();

  // General form: four comma-separated numbers re_h,im_h,re_v,im_v.
  double parts[4];
  std::istringstream in(text);
  for (int i = 0; i < 4; ++i) {
    std::string token;
    if (!std::getline(in, token, ','))
      throw ConfigError("polarization must be H|V|D|A or re_h,im_h,re_v,im_v: '" + text + "'");
    char* end = nullptr;
    parts[i] = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0')
      throw ConfigError("polarization component is not a number: '" + token + "'");
  }
  PolarizedAmplitude pol{{parts[0], parts[1]}, {parts[2], parts[3]}};
  if (!pol.is_normalized(1e-9)) throw ConfigError("polarization must be normalized");
  return pol;
}

std::string format_polarization(const PolarizedAmplitude& pol) {
  const auto is = [](const PolarizedAmplitude& a, const PolarizedAmplitude& b) {
    return a.h == b.h && a.v == b.v;
  };
  if (is(pol, PolarizedAmplitude::horizontal())) return "H";
  if (is(pol, PolarizedAmplitude::vertical())) return "V";
  if (is(pol, PolarizedAmplitude::diagonal())) return "D";
  if (is(pol, PolarizedAmplitude::antidiagonal())) return "A";
  return format_double(pol.h.real()) + "," + format_double(pol.h.imag()) + "," +
         format_double(pol.v.real()) + "," + format_double(pol.v.imag());
}

namespace {

PixelRect parse_rect(const std::string& text, const std::string& key) {
  std::string cleaned = text;
  for (auto& c : cleaned)
    if (c == ',') c = ' ';
  std::istringstream in(cleaned);
  PixelRect r;
  if (!(in >> r.x0 >> r.y0 >> r.x1 >> r.y1))
    throw ConfigError("key " + key + ": expected 'x0 y0 x1 y1': '" + text + "'");
  std::string rest;
  if (in >> rest) throw ConfigError("key " + key + ": trailing content: '" + text + "'");
  return r;
}

std::string format_rect(const PixelRect& r) {
  std::ostringstream out;
  out << r.x0 << " " << r.y0 << " " << r.x1 << " " << r.y1;
  return out.str();
}

bool known_preset(const std::string& name) {
  return name == "uo_stencil" || name == "glass_shard" || name == "bomb_lc" ||
         name == "identity";
}

constexpr const char* kKnownKeys[] = {
    "scene.preset",          "scene.file",
    "scene.phase_rad",       "grid.width",
    "grid.height",           "grid.pitch_mm",
    "splitter.r",            "splitter.t",
    "splitter.gamma",        "splitter.input_pol",
    "source.pump_sigma_mm",  "source.corr_sigma_mm",
    "source.pair_rate",      "detector.eta_bucket",
    "detector.eta_camera",   "detector.dark_rate_bucket",
    "detector.accidental_rate_camera",
    "run.n_frames",          "run.seed",
    "pipeline.accidental_correction",
    "roi.inside",            "roi.outside",
    "roi.background",        "output.dir",
    "output.channels", // written into resolved echoes, ignored on parse
};

void reject_unknown_keys(const KeyValueFile& kv) {
  for (const auto& [key, value] : kv.entries()) {
    bool known = false;
    for (const char* k : kKnownKeys) {
      if (key == k) {
        known = true;
        break;
      }
    }
    if (!known) throw ConfigError("unknown configuration key: " + key);
  }
}

} // namespace

void ScenarioConfig::validate() const {
  grid.validate();
  splitter.validate();
  source.validate();
  detector.validate();
  if (scene_file.empty()) {
    if (!known_preset(scene_preset)) throw ConfigError("unknown scene preset: " + scene_preset);
  } else {
    if (!std::filesystem::exists(scene_file))
      throw ConfigError("scene file not found: " + scene_file);
    if (!std::filesystem::exists(scene_file + ".scene"))
      throw ConfigError("scene descriptor not found: " + scene_file + ".scene");
  }
  rois.validate(grid);
  if (out_dir.empty()) throw ConfigError("output.dir must not be empty");
}

ScenarioConfig scenario_from_kv(const KeyValueFile& kv) {
  reject_unknown_keys(kv);
  ScenarioConfig c;

  if (kv.has("scene.file")) {
    c.scene_file = kv.get_string("scene.file");
    c.scene_preset.clear();
  } else if (kv.has("scene.preset")) {
    c.scene_preset = kv.get_string("scene.preset");
  }
  if (kv.has("scene.phase_rad")) c.scene_phase_rad = kv.get_double("scene.phase_rad");

  if (kv.has("grid.width")) c.grid.width = static_cast<int>(kv.get_int("grid.width"));
  if (kv.has("grid.height")) c.grid.height = static_cast<int>(kv.get_int("grid.height"));
  if (kv.has("grid.pitch_mm")) c.grid.pitch_mm = kv.get_double("grid.pitch_mm");

  if (kv.has("splitter.r")) c.splitter.r = kv.get_double("splitter.r");
  if (kv.has("splitter.t"))
    c.splitter.t = kv.get_double("splitter.t");
  else if (kv.has("splitter.r"))
    c.splitter.t = 1.0 - c.splitter.r;
  if (!kv.has("splitter.r") && kv.has("splitter.t")) c.splitter.r = 1.0 - c.splitter.t;
  if (kv.has("splitter.gamma")) c.splitter.gamma = kv.get_double("splitter.gamma");
  if (kv.has("splitter.input_pol"))
    c.splitter.input_pol = parse_polarization(kv.get_string("splitter.input_pol"));

  if (kv.has("source.pump_sigma_mm")) c.source.pump_sigma_mm = kv.get_double("source.pump_sigma_mm");
  if (kv.has("source.corr_sigma_mm")) c.source.corr_sigma_mm = kv.get_double("source.corr_sigma_mm");
  if (kv.has("source.pair_rate")) c.source.pair_rate = kv.get_double("source.pair_rate");

  if (kv.has("detector.eta_bucket")) c.detector.eta_bucket = kv.get_double("detector.eta_bucket");
  if (kv.has("detector.eta_camera")) c.detector.eta_camera = kv.get_double("detector.eta_camera");
  if (kv.has("detector.dark_rate_bucket"))
    c.detector.dark_rate_bucket = kv.get_double("detector.dark_rate_bucket");
  if (kv.has("detector.accidental_rate_camera"))
    c.detector.accidental_rate_camera = kv.get_double("detector.accidental_rate_camera");

  if (kv.has("run.n_frames")) c.n_frames = kv.get_uint("run.n_frames");
  if (!kv.has("run.seed")) throw ConfigError("run.seed is required (no wall-clock default)");
  c.seed = kv.get_uint("run.seed");

  if (kv.has("pipeline.accidental_correction")) {
    const std::string mode = kv.get_string("pipeline.accidental_correction");
    if (mode == "per_channel")
      c.accidental_correction = AccidentalCorrection::per_channel;
    else if (mode == "off")
      c.accidental_correction = AccidentalCorrection::off;
    else
      throw ConfigError("pipeline.accidental_correction must be per_channel|off");
  }

  const bool any_roi = kv.has("roi.inside") || kv.has("roi.outside") || kv.has("roi.background");
  if (any_roi) {
    c.rois.inside = parse_rect(kv.get_string("roi.inside"), "roi.inside");
    c.rois.outside = parse_rect(kv.get_string("roi.outside"), "roi.outside");
    c.rois.background = parse_rect(kv.get_string("roi.background"), "roi.background");
  } else if (!c.scene_preset.empty()) {
    c.rois = preset_rois(c.scene_preset, c.grid);
  } else {
    throw ConfigError("roi.inside/outside/background are required for file scenes");
  }

  if (kv.has("output.dir")) c.out_dir = kv.get_string("output.dir");

  c.validate();
  return c;
}

ScenarioConfig scenario_from_file(const std::string& path) {
  return scenario_from_kv(KeyValueFile::parse_file(path));
}

KeyValueFile scenario_to_kv(const ScenarioConfig& c) {
  KeyValueFile kv;
  if (!c.scene_file.empty())
    kv.set("scene.file", c.scene_file);
  else
    kv.set("scene.preset", c.scene_preset);
  kv.set("scene.phase_rad", format_double(c.scene_phase_rad));
  kv.set("grid.width", std::to_string(c.grid.width));
  kv.set("grid.height", std::to_string(c.grid.height));
  kv.set("grid.pitch_mm", format_double(c.grid.pitch_mm));
  kv.set("splitter.r", format_double(c.splitter.r));
  kv.set("splitter.t", format_double(c.splitter.t));
  kv.set("splitter.gamma", format_double(c.splitter.gamma));
  kv.set("splitter.input_pol", format_polarization(c.splitter.input_pol));
  kv.set("source.pump_sigma_mm", format_double(c.source.pump_sigma_mm));
  kv.set("source.corr_sigma_mm", format_double(c.source.corr_sigma_mm));
  kv.set("source.pair_rate", format_double(c.source.pair_rate));
  kv.set("detector.eta_bucket", format_double(c.detector.eta_bucket));
  kv.set("detector.eta_camera", format_double(c.detector.eta_camera));
  kv.set("detector.dark_rate_bucket", format_double(c.detector.dark_rate_bucket));
  kv.set("detector.accidental_rate_camera", format_double(c.detector.accidental_rate_camera));
  kv.set("run.n_frames", std::to_string(c.n_frames));
  kv.set("run.seed", std::to_string(c.seed));
  kv.set("pipeline.accidental_correction",
         c.accidental_correction == AccidentalCorrection::per_channel ? "per_channel" : "off");
  kv.set("roi.inside", format_rect(c.rois.inside));
  kv.set("roi.outside", format_rect(c.rois.outside));
  kv.set("roi.background", format_rect(c.rois.background));
  kv.set("output.dir", c.out_dir);
  return kv;
}

SceneObject build_scene(const ScenarioConfig& c) {
  if (!c.scene_file.empty()) {
    SceneObject scene = load_scene(c.scene_file);
    if (!(scene.grid().width == c.grid.width && scene.grid().height == c.grid.height))
      throw ConfigError("scene file dimensions mismatch grid");
    // The scenario grid owns the physical pitch.
    return SceneObject(c.grid, scene.elements(), scene.label());
  }
  return make_preset(c.scene_preset, c.grid, c.scene_phase_rad);
}

} // namespace ifgi
