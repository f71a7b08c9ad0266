#pragma once

#include <cstdint>
#include <string>

#include "ifgi/kv.hpp"
#include "ifgi/pipeline.hpp"
#include "ifgi/scene.hpp"
#include "ifgi/transport.hpp"

namespace ifgi {

/// Fully resolved experiment description. Parsed from a flat key-value
/// file; presets fill scene and ROI defaults which explicit keys
/// override. The seed has no wall-clock default: a missing run.seed is
/// a configuration error.
struct ScenarioConfig {
  std::string scene_preset = "uo_stencil"; ///< empty when scene_file is used
  std::string scene_file;                  ///< P2/P5 graymap + ".scene" sidecar
  double scene_phase_rad = 1.5707963267948966;

  SceneGrid grid;
  InterferometerSpec splitter;
  SourceSpec source;
  DetectorSpec detector;
  std::uint64_t n_frames = 1000;
  std::uint64_t seed = 0;
  AccidentalCorrection accidental_correction = AccidentalCorrection::per_channel;
  RoiPair rois;
  std::string out_dir = "out";

  /// Throws ConfigError on inconsistent values or, for file scenes, a
  /// missing scene file.
  void validate() const;
};

ScenarioConfig scenario_from_kv(const KeyValueFile& kv);
ScenarioConfig scenario_from_file(const std::string& path);

/// Canonical echo; scenario_from_kv(scenario_to_kv(c)) reproduces c and
/// serialization is byte-stable.
KeyValueFile scenario_to_kv(const ScenarioConfig& config);

/// Builds the configured scene (preset or file).
SceneObject build_scene(const ScenarioConfig& config);

PolarizedAmplitude parse_polarization(const std::string& text);
std::string format_polarization(const PolarizedAmplitude& pol);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

} // namespace ifgi
