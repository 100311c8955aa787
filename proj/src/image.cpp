#include "uwdepth/image.hpp"

#include <algorithm>
#include <cmath>

namespace uwd {

ImageBuffer::ImageBuffer(int h, int w, int c, double fill)
    : height(h), width(w), channels(c) {
  if (h < 1 || w < 1) throw InputError("image dimensions must be >= 1");
  if (c != 1 && c != 3) throw InputError("image must have 1 or 3 channels");
  data.assign(static_cast<std::size_t>(h) * w * c, fill);
}

DepthMap::DepthMap(int h, int w) : height(h), width(w) {
  if (h < 1 || w < 1) throw InputError("depth dimensions must be >= 1");
  data.assign(static_cast<std::size_t>(h) * w, 0.0);
  validity.assign(data.size(), 0);
}

void DepthMap::set(int y, int x, double v) {
  const std::size_t i = index(y, x);
  if (std::isfinite(v) && v > 0.0) {
    data[i] = v;
    validity[i] = 1;
  } else {
    data[i] = 0.0;
    validity[i] = 0;
  }
}

void DepthMap::set_invalid(int y, int x) {
  const std::size_t i = index(y, x);
  data[i] = 0.0;
  validity[i] = 0;
}

std::size_t DepthMap::valid_count() const {
  return static_cast<std::size_t>(
      std::count(validity.begin(), validity.end(), std::uint8_t(1)));
}

YuvImage::YuvImage(int h, int w) : height(h), width(w) {
  if (h < 1 || w < 1) throw InputError("image dimensions must be >= 1");
  const std::size_t n = static_cast<std::size_t>(h) * w;
  y.assign(n, 0.0);
  u.assign(n, 0.0);
  v.assign(n, 0.0);
}

ScalarMap::ScalarMap(int h, int w, double fill, bool valid_fill)
    : height(h), width(w) {
  if (h < 1 || w < 1) throw InputError("map dimensions must be >= 1");
  values.assign(static_cast<std::size_t>(h) * w, fill);
  valid.assign(values.size(), valid_fill ? 1 : 0);
}

double ScalarMap::mean_valid() const {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (valid[i]) {
      sum += values[i];
      ++n;
    }
  }
  if (n == 0) throw DegeneracyError("mean over empty valid set");
  return sum / static_cast<double>(n);
}

PixelMask::PixelMask(int h, int w, bool fill) : height(h), width(w) {
  if (h < 1 || w < 1) throw InputError("mask dimensions must be >= 1");
  data.assign(static_cast<std::size_t>(h) * w, fill ? 1 : 0);
}

std::size_t PixelMask::count() const {
  return static_cast<std::size_t>(
      std::count(data.begin(), data.end(), std::uint8_t(1)));
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

namespace {
constexpr double kLumaR = 0.299;
constexpr double kLumaG = 0.587;
constexpr double kLumaB = 0.114;
constexpr double kChromaB = 2.0 - 2.0 * kLumaB;  // 1.772
constexpr double kChromaR = 2.0 - 2.0 * kLumaR;  // 1.402
}  // namespace

YuvImage rgb_to_yuv(const ImageBuffer& img) {
  if (img.channels != 3) throw InputError("rgb_to_yuv expects a 3-channel image");
  YuvImage out(img.height, img.width);
  const std::size_t n = static_cast<std::size_t>(img.height) * img.width;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = img.data[3 * i + 0];
    const double g = img.data[3 * i + 1];
    const double b = img.data[3 * i + 2];
    const double y = kLumaR * r + kLumaG * g + kLumaB * b;
    out.y[i] = y;
    out.u[i] = (b - y) / kChromaB;
    out.v[i] = (r - y) / kChromaR;
  }
  return out;
}

ImageBuffer yuv_to_rgb(const YuvImage& yuv) {
  ImageBuffer out(yuv.height, yuv.width, 3);
  const std::size_t n = yuv.y.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double y = yuv.y[i];
    const double b = y + kChromaB * yuv.u[i];
    const double r = y + kChromaR * yuv.v[i];
    const double g = (y - kLumaR * r - kLumaB * b) / kLumaG;
    out.data[3 * i + 0] = r;
    out.data[3 * i + 1] = g;
    out.data[3 * i + 2] = b;
  }
  return out;
}

ScalarMap luma_map(const ImageBuffer& img) {
  ScalarMap out(img.height, img.width);
  const std::size_t n = out.values.size();
  if (img.channels == 1) {
    std::copy(img.data.begin(), img.data.end(), out.values.begin());
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      out.values[i] = kLumaR * img.data[3 * i + 0] +
                      kLumaG * img.data[3 * i + 1] +
                      kLumaB * img.data[3 * i + 2];
    }
  }
  return out;
}

}  // namespace uwd
