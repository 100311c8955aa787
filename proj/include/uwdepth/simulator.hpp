#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "uwdepth/geometry.hpp"
#include "uwdepth/watermodel.hpp"

namespace uwd {

struct PlaneTexture {
  std::uint64_t seed = 1;
  double scale = 1.5;     // lattice cells per meter at the base octave
  double contrast = 0.3;  // peak deviation from the base level
  double base = 0.55;
  int octaves = 4;
  bool colored = false;  // per-channel tint on top of the gray pattern
};

// Bounded textured plane: center point, orientation normal, half extents
// along the two derived in-plane axes.
struct ScenePlane {
  Eigen::Vector3d center = {0.0, 0.0, 3.0};
  Eigen::Vector3d normal = {0.0, 0.0, -1.0};
  double half_width = 4.0;
  double half_height = 3.0;
  PlaneTexture texture;
};

// Screen-space multiplicative brightness field, re-seeded every frame.
// Deliberately breaks photo-consistency between frames to exercise the
// local-variation weighting.
struct IlluminationField {
  bool enabled = false;
  double strength = 0.25;  // field spans [1 - strength, 1 + strength]
  double scale = 0.02;     // lattice cells per pixel
  std::uint64_t seed = 0;
};

struct SyntheticScene {
  int width = 320;
  int height = 240;
  CameraIntrinsics intrinsics{260.0, 260.0, 159.5, 119.5};
  std::vector<ScenePlane> planes;
  std::vector<RigidPose> trajectory;  // camera-to-world, one per frame
  WaterProperties water;
  std::string water_preset;  // name when the config used one, else empty
  double noise_std = 0.0;
  IlluminationField illumination;
  std::uint64_t seed = 0;
};

struct RenderedFrame {
  ImageBuffer image;        // after the medium and sensor noise
  ImageBuffer clear_image;  // scene radiance before the medium
  DepthMap depth;           // invalid where no geometry was hit
  RigidPose pose;           // camera-to-world
};

// Builds the trajectory from a constant per-frame twist: the camera steps
// by `linear` meters in its own frame and rotates by the axis-angle
// `angular` each frame, starting from the identity pose.
std::vector<RigidPose> velocity_trajectory(int frames,
                                           const Eigen::Vector3d& linear,
                                           const Eigen::Vector3d& angular);

// Scene description from JSON (see README for the schema).
SyntheticScene load_scene(const std::string& path);
SyntheticScene scene_from_json_text(const std::string& text);

// Ray-casts every frame, applies the water model, then optional Gaussian
// pixel noise, clamped to [0,1]. Fully deterministic for a fixed scene.
std::vector<RenderedFrame> render_sequence(const SyntheticScene& scene,
                                           const WaterProperties& water,
                                           double noise_std);

// Convenience overload using the scene's own water and noise settings.
std::vector<RenderedFrame> render_sequence(const SyntheticScene& scene);

// True where no geometry was rasterized or the range exceeds the horizon.
PixelMask background_region(
    const DepthMap& depth,
    double horizon = std::numeric_limits<double>::infinity());

}  // namespace uwd
