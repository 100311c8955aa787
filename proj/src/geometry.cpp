#include "uwdepth/geometry.hpp"

#include <cmath>

namespace uwd {

CameraIntrinsics::CameraIntrinsics(double fx_, double fy_, double cx_,
                                   double cy_)
    : fx(fx_), fy(fy_), cx(cx_), cy(cy_) {
  if (!(fx > 0.0) || !(fy > 0.0))
    throw InputError("focal lengths must be positive");
}

Eigen::Matrix4d RigidPose::matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation;
  m.topRightCorner<3, 1>() = translation;
  return m;
}

void RigidPose::validate() const {
  const Eigen::Matrix3d gram = rotation.transpose() * rotation;
  if ((gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-6)
    throw InputError("pose rotation is not orthonormal");
  if (std::abs(rotation.determinant() - 1.0) > 1e-6)
    throw InputError("pose rotation determinant is not +1");
  if (!translation.allFinite())
    throw InputError("pose translation is not finite");
}

RigidPose compose(const RigidPose& a, const RigidPose& b) {
  RigidPose out;
  out.rotation = a.rotation * b.rotation;
  out.translation = a.rotation * b.translation + a.translation;
  return out;
}

RigidPose invert(const RigidPose& a) {
  RigidPose out;
  out.rotation = a.rotation.transpose();
  out.translation = -(out.rotation * a.translation);
  return out;
}

RigidPose pose_from_matrix(const Eigen::Matrix4d& m) {
  RigidPose p;
  p.rotation = m.topLeftCorner<3, 3>();
  p.translation = m.topRightCorner<3, 1>();
  p.validate();
  return p;
}

PointGrid backproject(const DepthMap& depth, const CameraIntrinsics& K) {
  PointGrid grid;
  grid.height = depth.height;
  grid.width = depth.width;
  grid.points.assign(depth.data.size(), Eigen::Vector3d::Zero());
  grid.valid.assign(depth.data.size(), 0);
  for (int y = 0; y < depth.height; ++y) {
    for (int x = 0; x < depth.width; ++x) {
      const std::size_t i = grid.index(y, x);
      if (!depth.valid(y, x)) continue;
      const double d = depth.at(y, x);
      grid.points[i] =
          d * Eigen::Vector3d((x - K.cx) / K.fx, (y - K.cy) / K.fy, 1.0);
      grid.valid[i] = 1;
    }
  }
  return grid;
}

Eigen::Vector3d backproject_pixel(const DepthMap& depth,
                                  const CameraIntrinsics& K, int x, int y) {
  if (x < 0 || x >= depth.width || y < 0 || y >= depth.height)
    throw InputError("pixel outside the depth map");
  if (!depth.valid(y, x))
    throw DegeneracyError("backprojection of an invalid depth pixel");
  const double d = depth.at(y, x);
  return d * Eigen::Vector3d((x - K.cx) / K.fx, (y - K.cy) / K.fy, 1.0);
}

namespace {

// Snap near-integer sample coordinates so that lattice-aligned grids read
// source pixels verbatim instead of mixing in an ulp of the neighbor.
double snap(double v) {
  const double r = std::round(v);
  return std::abs(v - r) < 1e-9 ? r : v;
}

}  // namespace

PixelGrid reproject(const PointGrid& points, const RigidPose& T,
                    const CameraIntrinsics& K) {
  PixelGrid grid;
  grid.height = points.height;
  grid.width = points.width;
  const std::size_t n = points.points.size();
  grid.x.assign(n, 0.0);
  grid.y.assign(n, 0.0);
  grid.in_bounds.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!points.valid[i]) continue;
    const Eigen::Vector3d p = T.apply(points.points[i]);
    if (p.z() <= kNearClip) continue;
    const double u = snap(K.fx * p.x() / p.z() + K.cx);
    const double v = snap(K.fy * p.y() / p.z() + K.cy);
    grid.x[i] = u;
    grid.y[i] = v;
    grid.in_bounds[i] = (u >= 0.0 && u <= grid.width - 1.0 && v >= 0.0 &&
                         v <= grid.height - 1.0)
                            ? 1
                            : 0;
  }
  return grid;
}

PixelGrid identity_grid(int height, int width) {
  PixelGrid grid;
  grid.height = height;
  grid.width = width;
  const std::size_t n = static_cast<std::size_t>(height) * width;
  grid.x.resize(n);
  grid.y.resize(n);
  grid.in_bounds.assign(n, 1);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      grid.x[grid.index(y, x)] = x;
      grid.y[grid.index(y, x)] = y;
    }
  }
  return grid;
}

std::pair<ImageBuffer, PixelMask> warp(const ImageBuffer& source,
                                       const PixelGrid& grid) {
  if (grid.height != source.height || grid.width != source.width)
    throw InputError("warp grid dimensions do not match the source image");

  ImageBuffer out(source.height, source.width, source.channels, 0.0);
  PixelMask mask(source.height, source.width, false);
  const int W = source.width;
  const int H = source.height;
  const int C = source.channels;

  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      const std::size_t i = grid.index(y, x);
      if (!grid.in_bounds[i]) continue;
      const double sx = snap(grid.x[i]);
      const double sy = snap(grid.y[i]);
      int x0 = static_cast<int>(std::floor(sx));
      int y0 = static_cast<int>(std::floor(sy));
      const double fx = sx - x0;
      const double fy = sy - y0;
      int x1 = x0 + 1;
      int y1 = y0 + 1;
      if (x1 > W - 1) x1 = W - 1;
      if (y1 > H - 1) y1 = H - 1;
      const double w00 = (1.0 - fx) * (1.0 - fy);
      const double w01 = fx * (1.0 - fy);
      const double w10 = (1.0 - fx) * fy;
      const double w11 = fx * fy;
      for (int c = 0; c < C; ++c) {
        double v;
        if (fx == 0.0 && fy == 0.0) {
          v = source.at(y0, x0, c);
        } else {
          v = w00 * source.at(y0, x0, c) + w01 * source.at(y0, x1, c) +
              w10 * source.at(y1, x0, c) + w11 * source.at(y1, x1, c);
        }
        out.at(y, x, c) = v;
      }
      mask.set(y, x, true);
    }
  }
  return {std::move(out), std::move(mask)};
}

}  // namespace uwd
