#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "uwdepth/image.hpp"

namespace uwd {

struct MetricReport {
  double abs_rel = 0.0;
  double sq_rel = 0.0;
  double rmse = 0.0;      // meters
  double rmse_log = 0.0;
  double delta1 = 0.0;    // fraction with max(p/g, g/p) < 1.25
  double delta2 = 0.0;    // ... < 1.25^2
  double delta3 = 0.0;    // ... < 1.25^3
  std::optional<double> bg_error;  // mean background disparity, 1/m
  std::size_t pixel_count = 0;
};

// Aligns the scale-ambiguous prediction to ground truth: multiplies pred by
// median(gt) / median(pred) over the jointly valid pixels.
std::pair<DepthMap, double> median_scale(const DepthMap& pred,
                                         const DepthMap& gt);

// Standard monocular-depth error suite over jointly valid pixels, computed
// after internal median scaling. max_depth, when set, drops pixels whose
// ground truth exceeds it.
MetricReport depth_metrics(const DepthMap& pred, const DepthMap& gt,
                           std::optional<double> max_depth = std::nullopt);

// Mean predicted disparity over the background region of each image, then
// the mean across images. Invalid disparity pixels count as 0 (farthest).
double bg_error(const std::vector<DepthMap>& disparities,
                const std::vector<PixelMask>& masks);

// 1/depth with invalid pixels mapped to disparity 0.
DepthMap disparity_from_depth(const DepthMap& depth);

}  // namespace uwd
