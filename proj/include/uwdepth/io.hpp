#pragma once

#include <string>

#include "uwdepth/image.hpp"

namespace uwd {

// 8/16-bit grayscale or RGB PNG, scaled to [0,1] by the integer maximum.
// Alpha channels are stripped; palette images are expanded.
ImageBuffer load_image(const std::string& path);

// Values are clamped to [0,1] before quantization. bit_depth must be 8 or 16.
void save_image(const ImageBuffer& img, const std::string& path,
                int bit_depth = 8);

// Single-channel PFM ("Pf"). Non-positive and non-finite entries come back
// flagged invalid. Both endiannesses are accepted per the scale-sign rule.
DepthMap load_depth(const std::string& path);

// Writes little-endian (scale -1.0), bottom-up rows. Invalid pixels are
// stored as 0 so a round trip preserves the validity mask.
void save_depth(const DepthMap& depth, const std::string& path);

}  // namespace uwd
