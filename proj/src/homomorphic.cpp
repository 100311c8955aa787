#include "uwdepth/homomorphic.hpp"

#include <fftw3.h>

#include <cmath>
#include <memory>
#include <mutex>
#include <random>
#include <vector>

namespace uwd {

void HomomorphicParams::validate() const {
  if (!(cutoff >= 0.0)) throw InputError("cutoff must be >= 0");
  if (order < 1) throw InputError("filter order must be >= 1");
}

ScalarMap butterworth_highpass(int height, int width, double cutoff,
                               int order) {
  if (height < 1 || width < 1)
    throw InputError("butterworth_highpass: dimensions must be >= 1");
  HomomorphicParams{cutoff, order}.validate();

  ScalarMap H(height, width, 1.0);
  if (cutoff == 0.0) return H;

  const int cy = height / 2;
  const int cx = width / 2;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double dist = std::hypot(double(y - cy), double(x - cx));
      double value = 0.0;  // limit at the center bin
      if (dist > 0.0)
        value = 1.0 / (1.0 + std::pow(cutoff / dist, 2.0 * order));
      H.values[H.index(y, x)] = value;
    }
  }
  return H;
}

namespace {

// FFTW's planner is not reentrant; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwDeleter {
  void operator()(void* p) const { fftw_free(p); }
};
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwDeleter>;

ComplexBuffer alloc_complex(std::size_t n) {
  return ComplexBuffer(static_cast<fftw_complex*>(
      fftw_malloc(sizeof(fftw_complex) * n)));
}

}  // namespace

ScalarMap filter_luma(const ScalarMap& luma, const HomomorphicParams& params,
                      double* imag_residue) {
  params.validate();
  const int H = luma.height;
  const int W = luma.width;
  const std::size_t n = luma.values.size();

  ScalarMap out(H, W);
  if (params.cutoff == 0.0) {
    // Identity by convention; skips the transform round trip entirely.
    for (std::size_t i = 0; i < n; ++i) out.values[i] = clamp01(luma.values[i]);
    if (imag_residue) *imag_residue = 0.0;
    return out;
  }

  ComplexBuffer in = alloc_complex(n);
  ComplexBuffer freq = alloc_complex(n);
  ComplexBuffer spatial = alloc_complex(n);
  if (!in || !freq || !spatial) throw std::bad_alloc();

  for (std::size_t i = 0; i < n; ++i) {
    in[i][0] = std::log(luma.values[i] + kLogEpsilon);
    in[i][1] = 0.0;
  }

  fftw_plan forward, backward;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    forward = fftw_plan_dft_2d(H, W, in.get(), freq.get(), FFTW_FORWARD,
                               FFTW_ESTIMATE);
    backward = fftw_plan_dft_2d(H, W, freq.get(), spatial.get(), FFTW_BACKWARD,
                                FFTW_ESTIMATE);
  }
  fftw_execute(forward);

  const ScalarMap weights =
      butterworth_highpass(H, W, params.cutoff, params.order);
  // The weight grid is DC-centered; spectrum row r maps to centered row
  // (r + H/2) % H, likewise for columns.
  for (int y = 0; y < H; ++y) {
    const int wy = (y + H / 2) % H;
    for (int x = 0; x < W; ++x) {
      const int wx = (x + W / 2) % W;
      const double g = weights.values[weights.index(wy, wx)];
      const std::size_t i = static_cast<std::size_t>(y) * W + x;
      freq[i][0] *= g;
      freq[i][1] *= g;
    }
  }

  fftw_execute(backward);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }

  const double scale = 1.0 / static_cast<double>(n);
  double residue = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    residue = std::max(residue, std::abs(spatial[i][1] * scale));
    out.values[i] = clamp01(std::exp(spatial[i][0] * scale) - kLogEpsilon);
  }
  if (imag_residue) *imag_residue = residue;
  return out;
}

YuvImage homomorphic_filter_yuv(const YuvImage& yuv,
                                const HomomorphicParams& params) {
  ScalarMap luma(yuv.height, yuv.width);
  luma.values = yuv.y;
  const ScalarMap filtered = filter_luma(luma, params);

  YuvImage out(yuv.height, yuv.width);
  out.y = filtered.values;
  out.u = yuv.u;
  out.v = yuv.v;
  return out;
}

ImageBuffer homomorphic_filter(const ImageBuffer& img,
                               const HomomorphicParams& params) {
  if (img.channels != 3)
    throw InputError("homomorphic_filter expects a 3-channel image");
  const YuvImage filtered = homomorphic_filter_yuv(rgb_to_yuv(img), params);
  ImageBuffer out = yuv_to_rgb(filtered);
  for (double& v : out.data) v = clamp01(v);
  return out;
}

AugmentResult augment(const ImageBuffer& img, std::uint64_t seed, int order) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, kCutoffMax);
  const double cutoff = dist(rng);
  AugmentResult result;
  result.cutoff = cutoff;
  result.image = homomorphic_filter(img, HomomorphicParams{cutoff, order});
  return result;
}

}  // namespace uwd
