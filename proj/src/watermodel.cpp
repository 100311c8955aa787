#include "uwdepth/watermodel.hpp"

#include <cmath>

namespace uwd {

void WaterProperties::validate() const {
  for (int c = 0; c < 3; ++c) {
    if (!(chi[c] >= 0.0) || !std::isfinite(chi[c]))
      throw InputError("attenuation coefficient must be >= 0");
    if (!(ambient[c] >= 0.0 && ambient[c] <= 1.0))
      throw InputError("ambient light must lie in [0, 1]");
  }
}

WaterProperties water_preset(const std::string& name) {
  if (name == "default") return WaterProperties{};
  if (name == "clear")
    return WaterProperties{{0.12, 0.04, 0.03}, {0.05, 0.12, 0.15}};
  if (name == "turbid")
    return WaterProperties{{0.85, 0.30, 0.22}, {0.25, 0.45, 0.50}};
  throw InputError("unknown water preset: " + name);
}

ScalarMap transmission(const DepthMap& depth, double chi) {
  if (!(chi >= 0.0)) throw InputError("attenuation coefficient must be >= 0");
  ScalarMap out(depth.height, depth.width);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    if (!depth.validity[i])
      throw InputError("transmission: invalid depth pixel");
    out.values[i] = std::exp(-chi * depth.data[i]);
  }
  return out;
}

ImageBuffer apply_medium(const ImageBuffer& clear, const DepthMap& depth,
                         const WaterProperties& water) {
  if (clear.channels != 3)
    throw InputError("apply_medium expects a 3-channel image");
  if (clear.height != depth.height || clear.width != depth.width)
    throw InputError("apply_medium: image and depth dimensions do not match");
  water.validate();

  ImageBuffer out(clear.height, clear.width, 3);
  const std::size_t n = static_cast<std::size_t>(clear.height) * clear.width;
  for (std::size_t i = 0; i < n; ++i) {
    const bool valid = depth.validity[i] != 0;
    const double d = depth.data[i];
    for (int c = 0; c < 3; ++c) {
      const double t = valid ? std::exp(-water.chi[c] * d) : 0.0;
      out.data[3 * i + c] =
          clear.data[3 * i + c] * t + water.ambient[c] * (1.0 - t);
    }
  }
  return out;
}

}  // namespace uwd
