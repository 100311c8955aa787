#include "uwdepth/photoloss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace uwd {

void LossConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw InputError("alpha must lie in [0, 1]");
  if (lvw_window < 3 || lvw_window % 2 == 0)
    throw InputError("lvw_window must be odd and >= 3");
  if (!(corr_weight >= 0.0)) throw InputError("corr_weight must be >= 0");
}

namespace {

void require_same_shape(const ImageBuffer& a, const ImageBuffer& b,
                        const char* op) {
  if (!a.same_shape(b))
    throw InputError(std::string(op) + ": image dimensions do not match");
}

int clamp_index(int v, int hi) { return std::clamp(v, 0, hi); }

// k x k sliding mean with edge replication, separable running sums.
std::vector<double> box_mean(const std::vector<double>& src, int H, int W,
                             int k) {
  const int r = k / 2;
  std::vector<double> tmp(src.size());
  std::vector<double> out(src.size());
  const double inv_k = 1.0 / k;

  for (int y = 0; y < H; ++y) {
    const double* row = src.data() + static_cast<std::size_t>(y) * W;
    double* trow = tmp.data() + static_cast<std::size_t>(y) * W;
    double s = 0.0;
    for (int j = -r; j <= r; ++j) s += row[clamp_index(j, W - 1)];
    trow[0] = s * inv_k;
    for (int x = 1; x < W; ++x) {
      s += row[clamp_index(x + r, W - 1)] - row[clamp_index(x - 1 - r, W - 1)];
      trow[x] = s * inv_k;
    }
  }
  for (int x = 0; x < W; ++x) {
    double s = 0.0;
    for (int j = -r; j <= r; ++j)
      s += tmp[static_cast<std::size_t>(clamp_index(j, H - 1)) * W + x];
    out[x] = s * inv_k;
    for (int y = 1; y < H; ++y) {
      s += tmp[static_cast<std::size_t>(clamp_index(y + r, H - 1)) * W + x] -
           tmp[static_cast<std::size_t>(clamp_index(y - 1 - r, H - 1)) * W + x];
      out[static_cast<std::size_t>(y) * W + x] = s * inv_k;
    }
  }
  return out;
}

std::vector<double> channel_plane(const ImageBuffer& img, int c) {
  std::vector<double> plane(static_cast<std::size_t>(img.height) * img.width);
  for (std::size_t i = 0; i < plane.size(); ++i)
    plane[i] = img.data[i * img.channels + c];
  return plane;
}

}  // namespace

ScalarMap l1_map(const ImageBuffer& a, const ImageBuffer& b) {
  require_same_shape(a, b, "l1_map");
  ScalarMap out(a.height, a.width);
  const std::size_t n = out.values.size();
  const int C = a.channels;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (int c = 0; c < C; ++c)
      s += std::abs(a.data[i * C + c] - b.data[i * C + c]);
    out.values[i] = s / C;
  }
  return out;
}

ScalarMap ssim_dissimilarity_map(const ImageBuffer& a, const ImageBuffer& b) {
  require_same_shape(a, b, "ssim_dissimilarity_map");
  constexpr double C1 = 0.01 * 0.01;
  constexpr double C2 = 0.03 * 0.03;
  constexpr int kWindow = 3;

  const int H = a.height;
  const int W = a.width;
  ScalarMap out(H, W, 0.0);

  for (int c = 0; c < a.channels; ++c) {
    const std::vector<double> pa = channel_plane(a, c);
    const std::vector<double> pb = channel_plane(b, c);
    std::vector<double> paa(pa.size()), pbb(pa.size()), pab(pa.size());
    for (std::size_t i = 0; i < pa.size(); ++i) {
      paa[i] = pa[i] * pa[i];
      pbb[i] = pb[i] * pb[i];
      pab[i] = pa[i] * pb[i];
    }
    const auto mu_a = box_mean(pa, H, W, kWindow);
    const auto mu_b = box_mean(pb, H, W, kWindow);
    const auto e_aa = box_mean(paa, H, W, kWindow);
    const auto e_bb = box_mean(pbb, H, W, kWindow);
    const auto e_ab = box_mean(pab, H, W, kWindow);

    for (std::size_t i = 0; i < pa.size(); ++i) {
      const double var_a = e_aa[i] - mu_a[i] * mu_a[i];
      const double var_b = e_bb[i] - mu_b[i] * mu_b[i];
      const double cov = e_ab[i] - mu_a[i] * mu_b[i];
      const double ssim =
          ((2.0 * mu_a[i] * mu_b[i] + C1) * (2.0 * cov + C2)) /
          ((mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + C1) * (var_a + var_b + C2));
      out.values[i] += std::clamp((1.0 - ssim) * 0.5, 0.0, 1.0);
    }
  }
  for (double& v : out.values) v /= a.channels;
  return out;
}

ScalarMap reprojection_loss_map(const ImageBuffer& target,
                                const ImageBuffer& warped,
                                const LossConfig& cfg,
                                const PixelMask* coverage) {
  require_same_shape(target, warped, "reprojection_loss_map");
  cfg.validate();
  if (coverage &&
      (coverage->height != target.height || coverage->width != target.width))
    throw InputError("reprojection_loss_map: coverage mask dimensions differ");

  const ScalarMap l1 = l1_map(target, warped);
  const ScalarMap dssim = ssim_dissimilarity_map(target, warped);
  ScalarMap out(target.height, target.width);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] =
        cfg.alpha * l1.values[i] + (1.0 - cfg.alpha) * dssim.values[i];
    if (coverage && !coverage->data[i]) {
      out.values[i] = 0.0;
      out.valid[i] = 0;
    }
  }
  return out;
}

ScalarMap min_composite(const std::vector<ScalarMap>& maps) {
  if (maps.empty()) throw InputError("min_composite: empty map list");
  for (const ScalarMap& m : maps)
    if (!m.same_shape(maps.front()))
      throw InputError("min_composite: map dimensions do not match");

  ScalarMap out(maps.front().height, maps.front().width, 0.0, false);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    bool any = false;
    for (const ScalarMap& m : maps) {
      if (!m.valid[i]) continue;
      best = std::min(best, m.values[i]);
      any = true;
    }
    if (any) {
      out.values[i] = best;
      out.valid[i] = 1;
    }
  }
  return out;
}

ScalarMap local_variation(const ImageBuffer& img, int k) {
  if (k % 2 == 0 || k < 3)
    throw InputError("local_variation: window size must be odd and >= 3");
  if (k > img.height || k > img.width)
    throw InputError("local_variation: window larger than the image");

  const ScalarMap luma = luma_map(img);
  // Variance is shift invariant; filtering luma relative to a reference
  // sample makes a constant image yield exact zeros instead of box-sum
  // rounding residue.
  const double ref = luma.values.empty() ? 0.0 : luma.values[0];
  std::vector<double> centered(luma.values.size());
  std::vector<double> sq(luma.values.size());
  for (std::size_t i = 0; i < sq.size(); ++i) {
    centered[i] = luma.values[i] - ref;
    sq[i] = centered[i] * centered[i];
  }

  const auto mean = box_mean(centered, img.height, img.width, k);
  const auto mean_sq = box_mean(sq, img.height, img.width, k);

  ScalarMap out(img.height, img.width);
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = std::max(0.0, mean_sq[i] - mean[i] * mean[i]);
  return out;
}

ScalarMap normalize_lvw(const ScalarMap& sigma) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t i = 0; i < sigma.values.size(); ++i) {
    if (!sigma.valid[i]) continue;
    lo = std::min(lo, sigma.values[i]);
    hi = std::max(hi, sigma.values[i]);
    any = true;
  }
  if (!any) throw DegeneracyError("normalize_lvw: no valid pixels");

  ScalarMap out = sigma;
  const double range = hi - lo;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    if (!out.valid[i]) {
      out.values[i] = 0.0;
    } else {
      out.values[i] = range > 0.0 ? (sigma.values[i] - lo) / range : 0.0;
    }
  }
  return out;
}

ScalarMap lvw_weighted_loss(const ScalarMap& loss, const ScalarMap& weights) {
  if (!loss.same_shape(weights))
    throw InputError("lvw_weighted_loss: dimensions do not match");
  for (std::size_t i = 0; i < weights.values.size(); ++i) {
    if (weights.valid[i] &&
        (weights.values[i] < 0.0 || weights.values[i] > 1.0))
      throw InputError("lvw_weighted_loss: weight outside [0, 1]");
  }
  ScalarMap out(loss.height, loss.width, 0.0, false);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    if (loss.valid[i] && weights.valid[i]) {
      out.values[i] = loss.values[i] * weights.values[i];
      out.valid[i] = 1;
    }
  }
  return out;
}

ScalarMap ulap(const ImageBuffer& img) {
  if (img.channels != 3) throw InputError("ulap expects a 3-channel image");
  ScalarMap out(img.height, img.width);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    const double r = img.data[3 * i + 0];
    const double g = img.data[3 * i + 1];
    const double b = img.data[3 * i + 2];
    out.values[i] = std::max(b, g) - r;
  }
  return out;
}

double correlation_loss(const DepthMap& depth, const ScalarMap& prior) {
  if (depth.height != prior.height || depth.width != prior.width)
    throw InputError("correlation_loss: dimensions do not match");

  std::vector<double> d, u;
  d.reserve(depth.data.size());
  u.reserve(depth.data.size());
  for (std::size_t i = 0; i < depth.data.size(); ++i) {
    if (depth.validity[i] && prior.valid[i]) {
      d.push_back(depth.data[i]);
      u.push_back(prior.values[i]);
    }
  }
  if (d.size() < 2)
    throw DegeneracyError("correlation_loss: fewer than 2 jointly valid pixels");

  // An exactly constant side is detected by range; the centered variance
  // sums below can carry a small positive rounding residue and miss it.
  const auto [min_d, max_d] = std::minmax_element(d.begin(), d.end());
  const auto [min_u, max_u] = std::minmax_element(u.begin(), u.end());
  if (*min_d == *max_d || *min_u == *max_u)
    throw DegeneracyError(
        "correlation_loss: constant input, correlation undefined");

  double mean_d = 0.0, mean_u = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    mean_d += d[i];
    mean_u += u[i];
  }
  mean_d /= static_cast<double>(d.size());
  mean_u /= static_cast<double>(u.size());

  double sdd = 0.0, suu = 0.0, sdu = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double dd = d[i] - mean_d;
    const double du = u[i] - mean_u;
    sdd += dd * dd;
    suu += du * du;
    sdu += dd * du;
  }
  if (sdd <= 0.0 || suu <= 0.0)
    throw DegeneracyError(
        "correlation_loss: constant input, correlation undefined");
  return 1.0 - sdu / std::sqrt(sdd * suu);
}

namespace {

ScalarMap mean_composite(const std::vector<ScalarMap>& maps) {
  ScalarMap out(maps.front().height, maps.front().width, 0.0, false);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    double sum = 0.0;
    int n = 0;
    for (const ScalarMap& m : maps) {
      if (!m.valid[i]) continue;
      sum += m.values[i];
      ++n;
    }
    if (n > 0) {
      out.values[i] = sum / n;
      out.valid[i] = 1;
    }
  }
  return out;
}

}  // namespace

TotalLoss total_loss(const ImageBuffer& target,
                     const std::vector<ImageBuffer>& sources,
                     const DepthMap& depth,
                     const std::vector<RigidPose>& target_to_source,
                     const CameraIntrinsics& K, const LossConfig& cfg) {
  cfg.validate();
  if (sources.empty()) throw InputError("total_loss: no source frames");
  if (sources.size() != target_to_source.size())
    throw InputError("total_loss: one pose per source frame required");
  if (depth.height != target.height || depth.width != target.width)
    throw InputError("total_loss: depth dimensions do not match the target");
  for (const ImageBuffer& s : sources) require_same_shape(target, s, "total_loss");

  TotalLoss result;
  if (cfg.use_lvw)
    result.lvw_mask = normalize_lvw(local_variation(target, cfg.lvw_window));

  const PointGrid points = backproject(depth, K);
  std::vector<ScalarMap> maps;
  maps.reserve(sources.size());
  for (std::size_t s = 0; s < sources.size(); ++s) {
    const PixelGrid grid = reproject(points, target_to_source[s], K);
    const auto [warped, mask] = warp(sources[s], grid);
    ScalarMap m = reprojection_loss_map(target, warped, cfg, &mask);
    if (cfg.use_lvw) m = lvw_weighted_loss(m, result.lvw_mask);
    maps.push_back(std::move(m));
  }

  result.map =
      cfg.use_min_composite ? min_composite(maps) : mean_composite(maps);
  result.photometric = result.map.mean_valid();
  if (cfg.corr_weight > 0.0)
    result.correlation = correlation_loss(depth, ulap(target));
  result.value = result.photometric + cfg.corr_weight * result.correlation;
  return result;
}

}  // namespace uwd
