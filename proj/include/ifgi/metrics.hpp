#pragma once

#include <cstdint>
#include <optional>

#include "ifgi/image.hpp"
#include "ifgi/scene.hpp"

namespace ifgi {

struct RoiStats {
  double mean = 0.0;
  double sample_variance = 0.0; ///< (n-1) normalization
  std::int64_t n = 0;
};

/// Throws ConfigError on an empty or out-of-grid region.
RoiStats roi_stats(const SignedImage& image, const PixelRect& roi);
double roi_mean(const SignedImage& image, const PixelRect& roi);

/// Mean photons/pixel outside the object region minus inside it.
double delta_n(const SignedImage& image, const RoiPair& rois);

/// (N_out - N_in) / (N_out + N_in); throws ConfigError when the
/// denominator is zero.
double visibility(const SignedImage& image, const RoiPair& rois);

/// Sample standard deviation over the background region (>= 2 pixels).
double background_sigma(const SignedImage& image, const PixelRect& bg_roi);

/// Expected background noise after combining n_channels statistically
/// independent channels of equal single-channel noise: sigma * sqrt(n).
double noise_prediction(double sigma_single, int n_channels);

struct MetricsRecord {
  double delta_n = 0.0;
  std::optional<double> visibility; ///< absent when N_out + N_in = 0
  double sigma_bg = 0.0;
  double n_out_mean = 0.0;
  double n_in_mean = 0.0;
};

MetricsRecord compute_metrics(const SignedImage& image, const RoiPair& rois);

} // namespace ifgi
