#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ifgi/config.hpp"
#include "ifgi/pgm.hpp"
#include "ifgi/metrics.hpp"
#include "ifgi/pipeline.hpp"

namespace ifgi {

/// One metrics CSV row. The column set is fixed; optional fields render
/// as empty cells. Oracle predictions ride along in every row so a
/// result file is self-checking.
struct MetricsRow {
  std::string param;  ///< swept parameter name, empty outside sweeps
  std::string value;  ///< swept value, empty outside sweeps
  std::string mode;
  std::string scene;
  double r = 0.0, t = 1.0, gamma = 1.0;
  std::uint64_t n_frames = 0;
  double pair_rate = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t pairs = 0, interacted = 0, absorbed = 0, discarded = 0;
  double interacted_frac = 0.0;
  MetricsRecord metrics;
  std::optional<double> delta_n_ref;   ///< direct-probe baseline in sweeps
  std::optional<double> delta_n_ratio; ///< delta_n / delta_n_ref
  std::optional<double> d_in_mean;    ///< accidental-corrected destructive port, inside ROI
  std::optional<double> cd_in_mean;   ///< corrected C+D, inside ROI
  std::optional<double> pd_measured;  ///< d_in_mean / cd_in_mean
  double oracle_gain = 1.0;           ///< |r^2 - r t - 1|, 1 for the direct probe
  double oracle_interaction = 1.0;    ///< t, 1 for the direct probe
  std::optional<double> oracle_pd;    ///< 2 r t (1 - cos phi) for phase scenes
};

std::string csv_header();
std::string csv_row(const MetricsRow& row);

MetricsRow build_metrics_row(const RunReport& report, const ScenarioConfig& config);

/// Parsed CSV: one map per data row, keyed by header column.
std::vector<std::map<std::string, std::string>> read_metrics_csv(const std::string& path);

/// 16-bit graymap export; throws IoError when a count exceeds 65535.
Pgm count_image_to_pgm(const CountImage& image);

/// Offset-encoded 16-bit export for signed images; the offset is
/// recorded in a sidecar at `path + ".offset"`.
void write_signed_pgm(const std::string& path, const SignedImage& image);
SignedImage read_signed_pgm(const std::string& path);

/// Writes the full artifact set of one run into `dir`:
/// one <channel>.pgm per raw channel, composed.pgm (+ .offset sidecar),
/// metrics.csv, resolved.cfg.
void write_run_outputs(const std::string& dir, const RunReport& report,
                       const ScenarioConfig& config);

} // namespace ifgi
