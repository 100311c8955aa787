#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <utility>
#include <vector>

#include "uwdepth/image.hpp"

namespace uwd {

struct CameraIntrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;

  CameraIntrinsics() = default;
  CameraIntrinsics(double fx_, double fy_, double cx_, double cy_);
};

// Rigid transform p' = R p + t. Rotation must be orthonormal with det +1
// (checked to 1e-6 by validate()).
struct RigidPose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  static RigidPose identity() { return RigidPose{}; }

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const {
    return rotation * p + translation;
  }
  Eigen::Matrix4d matrix() const;

  void validate() const;
};

// compose(a, b) applies b first, then a (matrix product a * b).
RigidPose compose(const RigidPose& a, const RigidPose& b);
RigidPose invert(const RigidPose& a);
RigidPose pose_from_matrix(const Eigen::Matrix4d& m);

// Camera-frame 3D points, one per pixel; invalid where the source depth
// pixel was invalid.
struct PointGrid {
  int height = 0;
  int width = 0;
  std::vector<Eigen::Vector3d> points;
  std::vector<std::uint8_t> valid;

  std::size_t index(int y, int x) const {
    return static_cast<std::size_t>(y) * width + x;
  }
};

// Continuous target pixel coordinates per source pixel. Coordinates within
// 1e-9 of an integer are snapped to it, so identity chains land exactly on
// the lattice. in_bounds is true iff the point projected in front of the
// camera (z > near clip) and both coordinates lie inside
// [0, W-1] x [0, H-1].
struct PixelGrid {
  int height = 0;
  int width = 0;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<std::uint8_t> in_bounds;

  std::size_t index(int yy, int xx) const {
    return static_cast<std::size_t>(yy) * width + xx;
  }
};

// Points projecting closer than this are treated as behind the camera.
inline constexpr double kNearClip = 1e-6;

// Pixel (u,v) with depth d lifts to d * ((u-cx)/fx, (v-cy)/fy, 1).
// Pixel centers sit at integer coordinates, no half-pixel offset.
PointGrid backproject(const DepthMap& depth, const CameraIntrinsics& K);

// Single-pixel variant; throws DegeneracyError on an invalid depth pixel.
Eigen::Vector3d backproject_pixel(const DepthMap& depth,
                                  const CameraIntrinsics& K, int x, int y);

PixelGrid reproject(const PointGrid& points, const RigidPose& T,
                    const CameraIntrinsics& K);

// Identity lattice grid (every pixel maps to itself).
PixelGrid identity_grid(int height, int width);

// Bilinear sampling of source at the grid coordinates. Out-of-bounds grid
// entries produce value 0 and mask false. Sample coordinates within 1e-9 px
// of an integer snap to it, so lattice grids reproduce the source exactly.
std::pair<ImageBuffer, PixelMask> warp(const ImageBuffer& source,
                                       const PixelGrid& grid);

}  // namespace uwd
