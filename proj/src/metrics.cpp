#include "uwdepth/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace uwd {

namespace {

// Median as the mean of the two middle order statistics.
double median_of(std::vector<double> v) {
  const std::size_t n = v.size();
  const std::size_t mid = n / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  const double hi = v[mid];
  if (n % 2 == 1) return hi;
  std::nth_element(v.begin(), v.begin() + mid - 1, v.begin() + mid);
  return 0.5 * (v[mid - 1] + hi);
}

struct JointSamples {
  std::vector<double> pred, gt;
};

JointSamples gather_joint(const DepthMap& pred, const DepthMap& gt,
                          std::optional<double> max_depth) {
  if (pred.height != gt.height || pred.width != gt.width)
    throw InputError("depth maps have mismatched dimensions");
  JointSamples s;
  for (std::size_t i = 0; i < pred.data.size(); ++i) {
    if (!pred.validity[i] || !gt.validity[i]) continue;
    if (max_depth && gt.data[i] > *max_depth) continue;
    s.pred.push_back(pred.data[i]);
    s.gt.push_back(gt.data[i]);
  }
  return s;
}

}  // namespace

std::pair<DepthMap, double> median_scale(const DepthMap& pred,
                                         const DepthMap& gt) {
  const JointSamples s = gather_joint(pred, gt, std::nullopt);
  if (s.pred.empty())
    throw InputError("median_scale: no jointly valid pixels");
  const double med_pred = median_of(s.pred);
  const double med_gt = median_of(s.gt);
  if (med_pred <= 0.0)
    throw DegeneracyError("median_scale: prediction median is not positive");
  const double scale = med_gt / med_pred;

  DepthMap out = pred;
  for (std::size_t i = 0; i < out.data.size(); ++i)
    if (out.validity[i]) out.data[i] *= scale;
  return {std::move(out), scale};
}

MetricReport depth_metrics(const DepthMap& pred, const DepthMap& gt,
                           std::optional<double> max_depth) {
  const JointSamples s = gather_joint(pred, gt, max_depth);
  const std::size_t n = s.pred.size();
  if (n == 0) throw InputError("depth_metrics: no jointly valid pixels");

  const double med_pred = median_of(s.pred);
  if (med_pred <= 0.0)
    throw DegeneracyError("depth_metrics: prediction median is not positive");
  const double scale = median_of(s.gt) / med_pred;

  double abs_rel = 0.0, sq_rel = 0.0, sq_err = 0.0, sq_log = 0.0;
  std::size_t d1 = 0, d2 = 0, d3 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = s.pred[i] * scale;
    const double g = s.gt[i];
    if (p <= 0.0 || g <= 0.0)
      throw DegeneracyError("depth_metrics: non-positive value reached a log");
    const double diff = p - g;
    abs_rel += std::abs(diff) / g;
    sq_rel += diff * diff / g;
    sq_err += diff * diff;
    const double dlog = std::log(p) - std::log(g);
    sq_log += dlog * dlog;
    const double ratio = std::max(p / g, g / p);
    if (ratio < 1.25) ++d1;
    if (ratio < 1.25 * 1.25) ++d2;
    if (ratio < 1.25 * 1.25 * 1.25) ++d3;
  }

  MetricReport report;
  const double dn = static_cast<double>(n);
  report.abs_rel = abs_rel / dn;
  report.sq_rel = sq_rel / dn;
  report.rmse = std::sqrt(sq_err / dn);
  report.rmse_log = std::sqrt(sq_log / dn);
  report.delta1 = d1 / dn;
  report.delta2 = d2 / dn;
  report.delta3 = d3 / dn;
  report.pixel_count = n;
  return report;
}

double bg_error(const std::vector<DepthMap>& disparities,
                const std::vector<PixelMask>& masks) {
  if (disparities.empty())
    throw InputError("bg_error: at least one image is required");
  if (disparities.size() != masks.size())
    throw InputError("bg_error: disparity and mask counts differ");

  double total = 0.0;
  for (std::size_t i = 0; i < disparities.size(); ++i) {
    const DepthMap& disp = disparities[i];
    const PixelMask& mask = masks[i];
    if (disp.height != mask.height || disp.width != mask.width)
      throw InputError("bg_error: mask dimensions do not match the disparity");
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t j = 0; j < disp.data.size(); ++j) {
      if (!mask.data[j]) continue;
      sum += disp.validity[j] ? disp.data[j] : 0.0;
      ++count;
    }
    if (count == 0) throw InputError("bg_error: empty background mask");
    total += sum / static_cast<double>(count);
  }
  return total / static_cast<double>(disparities.size());
}

DepthMap disparity_from_depth(const DepthMap& depth) {
  DepthMap out(depth.height, depth.width);
  for (int y = 0; y < depth.height; ++y)
    for (int x = 0; x < depth.width; ++x)
      if (depth.valid(y, x)) out.set(y, x, 1.0 / depth.at(y, x));
  return out;
}

}  // namespace uwd
