#include "ifgi/metrics.hpp"

#include <cmath>

#include "ifgi/errors.hpp"

namespace ifgi {

RoiStats roi_stats(const SignedImage& image, const PixelRect& roi) {
  if (!roi.within(image.grid)) throw ConfigError("ROI outside the grid");
  if (roi.empty()) throw ConfigError("ROI is empty");

  double sum = 0.0;
  for (int y = roi.y0; y < roi.y1; ++y)
    for (int x = roi.x0; x < roi.x1; ++x) sum += static_cast<double>(image.at(x, y));
  const auto n = static_cast<std::int64_t>(roi.area());
  const double mean = sum / static_cast<double>(n);

  double ss = 0.0;
  for (int y = roi.y0; y < roi.y1; ++y) {
    for (int x = roi.x0; x < roi.x1; ++x) {
      const double d = static_cast<double>(image.at(x, y)) - mean;
      ss += d * d;
    }
  }
  const double variance = (n > 1) ? ss / static_cast<double>(n - 1) : 0.0;
  return {mean, variance, n};
}

double roi_mean(const SignedImage& image, const PixelRect& roi) {
  return roi_stats(image, roi).mean;
}

double delta_n(const SignedImage& image, const RoiPair& rois) {
  rois.validate(image.grid);
  return roi_mean(image, rois.outside) - roi_mean(image, rois.inside);
}

double visibility(const SignedImage& image, const RoiPair& rois) {
  rois.validate(image.grid);
  const double out = roi_mean(image, rois.outside);
  const double in = roi_mean(image, rois.inside);
  const double denom = out + in;
  if (denom == 0.0) throw ConfigError("visibility undefined: N_out + N_in = 0");
  return (out - in) / denom;
}

double background_sigma(const SignedImage& image, const PixelRect& bg_roi) {
  if (bg_roi.area() < 2) throw ConfigError("background ROI needs at least 2 pixels");
  return std::sqrt(roi_stats(image, bg_roi).sample_variance);
}

double noise_prediction(double sigma_single, int n_channels) {
  if (sigma_single < 0.0) throw ConfigError("sigma must be non-negative");
  if (n_channels < 1) throw ConfigError("channel count must be >= 1");
  return sigma_single * std::sqrt(static_cast<double>(n_channels));
}

MetricsRecord compute_metrics(const SignedImage& image, const RoiPair& rois) {
  rois.validate(image.grid);
  MetricsRecord rec;
  rec.n_out_mean = roi_mean(image, rois.outside);
  rec.n_in_mean = roi_mean(image, rois.inside);
  rec.delta_n = rec.n_out_mean - rec.n_in_mean;
  const double denom = rec.n_out_mean + rec.n_in_mean;
  if (denom != 0.0) rec.visibility = (rec.n_out_mean - rec.n_in_mean) / denom;
  rec.sigma_bg = background_sigma(image, rois.background);
  return rec;
}

} // namespace ifgi
