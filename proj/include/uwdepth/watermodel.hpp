#pragma once

#include <array>
#include <string>

#include "uwdepth/image.hpp"

namespace uwd {

// Per-channel attenuation chi (1/m) and global ambient light A (order R,G,B).
struct WaterProperties {
  std::array<double, 3> chi = {0.40, 0.10, 0.07};
  std::array<double, 3> ambient = {0.15, 0.35, 0.45};

  void validate() const;
};

// Named presets: "default", "clear", "turbid". All attenuate red fastest.
WaterProperties water_preset(const std::string& name);

// t = exp(-chi * d) for one channel, in (0, 1]. Every depth pixel must be
// valid.
ScalarMap transmission(const DepthMap& depth, double chi);

// I = J t + A (1 - t) per channel. Invalid depth pixels are treated as
// infinitely far, producing pure ambient light.
ImageBuffer apply_medium(const ImageBuffer& clear, const DepthMap& depth,
                         const WaterProperties& water);

}  // namespace uwd
