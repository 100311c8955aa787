#pragma once

#include <vector>

#include "uwdepth/geometry.hpp"
#include "uwdepth/image.hpp"

namespace uwd {

struct LossConfig {
  // Weight of the L1 term; the SSIM dissimilarity term gets 1 - alpha.
  double alpha = 0.1;
  // Odd side length of the local-variation window.
  int lvw_window = 25;
  // Multiplier on the depth/attenuation-prior correlation term. Zero
  // disables the term entirely (it is then never evaluated).
  double corr_weight = 1e-5;
  // Per-pixel minimum over source frames; arithmetic mean when false.
  bool use_min_composite = true;
  // Weight the loss by the normalized local-variation mask of the target.
  bool use_lvw = true;

  void validate() const;
};

// Per-pixel mean over channels of |a - b|.
ScalarMap l1_map(const ImageBuffer& a, const ImageBuffer& b);

// (1 - SSIM) / 2 with 3x3 uniform local statistics, C1 = 0.01^2,
// C2 = 0.03^2 for unit range, edge replication at the border, averaged over
// channels. Zero for identical images, values in [0, 1].
ScalarMap ssim_dissimilarity_map(const ImageBuffer& a, const ImageBuffer& b);

// alpha * L1 + (1 - alpha) * SSIM dissimilarity. Pixels excluded by the
// warp coverage mask (when given) are invalid in the result.
ScalarMap reprojection_loss_map(const ImageBuffer& target,
                                const ImageBuffer& warped,
                                const LossConfig& cfg,
                                const PixelMask* coverage = nullptr);

// Per-pixel minimum over the valid entries of the maps; invalid only where
// every map is invalid.
ScalarMap min_composite(const std::vector<ScalarMap>& maps);

// Local variance E(x^2) - (E(x))^2 over a k x k window of the luma plane,
// border handled by edge replication. k must be odd and fit the image.
ScalarMap local_variation(const ImageBuffer& img, int k);

// Global min/max normalization to [0, 1]; a constant map yields all zeros.
ScalarMap normalize_lvw(const ScalarMap& sigma);

// Elementwise product; weights must lie in [0, 1]. Validity is the AND of
// both masks.
ScalarMap lvw_weighted_loss(const ScalarMap& loss, const ScalarMap& weights);

// Attenuation prior max(B, G) - R per pixel, in [-1, 1].
ScalarMap ulap(const ImageBuffer& img);

// 1 - Pearson(d, prior) over jointly valid pixels, in [0, 2]. Throws
// DegeneracyError when either side is constant or fewer than two pixels
// are jointly valid.
double correlation_loss(const DepthMap& depth, const ScalarMap& prior);

struct TotalLoss {
  double value = 0.0;
  double photometric = 0.0;
  double correlation = 0.0;  // unweighted term; 0 when disabled
  ScalarMap map;             // composite per-pixel photometric loss
  ScalarMap lvw_mask;        // empty when LVW is off
};

// Full loss for one target frame: warp each source into the target view
// using the target depth and the per-source relative pose, form the
// weighted reprojection maps, composite, reduce by the mean over valid
// pixels, and add corr_weight times the prior-correlation term.
TotalLoss total_loss(const ImageBuffer& target,
                     const std::vector<ImageBuffer>& sources,
                     const DepthMap& depth,
                     const std::vector<RigidPose>& target_to_source,
                     const CameraIntrinsics& K, const LossConfig& cfg);

}  // namespace uwd
