#pragma once

#include <cstdint>

#include "uwdepth/image.hpp"

namespace uwd {

inline constexpr double kCutoffMax = 250.0;
inline constexpr double kLogEpsilon = 1e-6;

struct HomomorphicParams {
  double cutoff = 0.0;  // half-power radius in frequency bins
  int order = 2;

  void validate() const;
};

// Butterworth high-pass weights H = 1 / (1 + (cutoff / F)^(2 order)) on a
// DC-centered grid, F being the distance to the center bin
// (height/2, width/2). H(F = cutoff) = 0.5; the center bin gets 0.
// cutoff = 0 yields an all-ones grid.
ScalarMap butterworth_highpass(int height, int width, double cutoff, int order);

// One plane through the log -> FFT -> weight -> inverse -> exp chain,
// clamped to [0, 1]. imag_residue, when non-null, receives the largest
// |imaginary| component of the inverse transform before it is discarded.
ScalarMap filter_luma(const ScalarMap& luma, const HomomorphicParams& params,
                      double* imag_residue = nullptr);

// Filters the luma plane only; chroma planes are copied verbatim.
YuvImage homomorphic_filter_yuv(const YuvImage& yuv,
                                const HomomorphicParams& params);

// RGB in, RGB out: convert to YUV, filter luma, reconstruct.
ImageBuffer homomorphic_filter(const ImageBuffer& img,
                               const HomomorphicParams& params);

struct AugmentResult {
  ImageBuffer image;
  double cutoff = 0.0;  // the drawn value, for logging
};

// Randomized augmentation: cutoff ~ U[0, 250] drawn from the given seed,
// filter order 2. Deterministic per seed.
AugmentResult augment(const ImageBuffer& img, std::uint64_t seed,
                      int order = 2);

}  // namespace uwd
