#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "uwdepth/errors.hpp"

namespace uwd {

// Interleaved row-major radiance image, nominal range [0,1], 1 or 3 channels.
struct ImageBuffer {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<double> data;

  ImageBuffer() = default;
  ImageBuffer(int h, int w, int c, double fill = 0.0);

  std::size_t index(int y, int x, int c) const {
    return (static_cast<std::size_t>(y) * width + x) * channels + c;
  }
  double& at(int y, int x, int c = 0) { return data[index(y, x, c)]; }
  double at(int y, int x, int c = 0) const { return data[index(y, x, c)]; }

  bool same_shape(const ImageBuffer& o) const {
    return height == o.height && width == o.width && channels == o.channels;
  }
};

// Scene range in meters. Pixels that are non-positive or non-finite are
// flagged invalid instead of rejected; values at invalid pixels are kept as 0.
struct DepthMap {
  int height = 0;
  int width = 0;
  std::vector<double> data;
  std::vector<std::uint8_t> validity;

  DepthMap() = default;
  DepthMap(int h, int w);

  std::size_t index(int y, int x) const {
    return static_cast<std::size_t>(y) * width + x;
  }
  double at(int y, int x) const { return data[index(y, x)]; }
  bool valid(int y, int x) const { return validity[index(y, x)] != 0; }

  // Stores v if it is finite and > 0, otherwise marks the pixel invalid.
  void set(int y, int x, double v);
  void set_invalid(int y, int x);

  std::size_t valid_count() const;
};

// Full-range luma plus offset-free chroma (u = scaled B-Y, v = scaled R-Y).
struct YuvImage {
  int height = 0;
  int width = 0;
  std::vector<double> y, u, v;

  YuvImage() = default;
  YuvImage(int h, int w);

  std::size_t index(int yy, int x) const {
    return static_cast<std::size_t>(yy) * width + x;
  }
};

// Per-pixel scalar field with a validity mask. Houses loss maps, priors,
// weights, and frequency-domain filter grids.
struct ScalarMap {
  int height = 0;
  int width = 0;
  std::vector<double> values;
  std::vector<std::uint8_t> valid;

  ScalarMap() = default;
  ScalarMap(int h, int w, double fill = 0.0, bool valid_fill = true);

  std::size_t index(int y, int x) const {
    return static_cast<std::size_t>(y) * width + x;
  }
  double at(int y, int x) const { return values[index(y, x)]; }
  bool valid_at(int y, int x) const { return valid[index(y, x)] != 0; }

  bool same_shape(const ScalarMap& o) const {
    return height == o.height && width == o.width;
  }

  // Mean over valid pixels; throws DegeneracyError when none are valid.
  double mean_valid() const;
};

// Boolean per-pixel mask (warp coverage, background regions).
struct PixelMask {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> data;

  PixelMask() = default;
  PixelMask(int h, int w, bool fill = false);

  std::size_t index(int y, int x) const {
    return static_cast<std::size_t>(y) * width + x;
  }
  bool at(int y, int x) const { return data[index(y, x)] != 0; }
  void set(int y, int x, bool v) { data[index(y, x)] = v ? 1 : 0; }

  std::size_t count() const;
};

double clamp01(double v);

// BT.601 full-range conversion. y = 0.299 R + 0.587 G + 0.114 B,
// u = (B - y) / 1.772, v = (R - y) / 1.402; chroma is centered at 0.
// The pair is exactly inverse to numerical precision.
YuvImage rgb_to_yuv(const ImageBuffer& img);
ImageBuffer yuv_to_rgb(const YuvImage& yuv);

// Luma plane of a 3-channel image; identity copy for single-channel input.
ScalarMap luma_map(const ImageBuffer& img);

}  // namespace uwd
