#pragma once

#include <optional>
#include <string>
#include <vector>

#include "uwdepth/geometry.hpp"
#include "uwdepth/photoloss.hpp"

namespace uwd {

struct FrameRecord {
  std::string image_path;
  std::string depth_path;  // may be empty
  std::string pose_path;   // may be empty
  double timestamp = 0.0;
};

struct SequenceManifest {
  std::string intrinsics_path;
  std::optional<std::string> water_preset;
  std::vector<FrameRecord> frames;
};

// Intrinsics file: JSON {fx, fy, cx, cy, width, height}.
struct IntrinsicsSpec {
  CameraIntrinsics K;
  int width = 0;
  int height = 0;
};

IntrinsicsSpec load_intrinsics(const std::string& path);
void save_intrinsics(const IntrinsicsSpec& spec, const std::string& path);

// Pose file: JSON 16-element row-major 4x4 camera-to-world matrix.
RigidPose load_pose(const std::string& path);
void save_pose(const RigidPose& pose, const std::string& path);

// Manifest paths are stored relative to the manifest file. Loading resolves
// them, checks every referenced file exists, and enforces strictly
// increasing timestamps.
SequenceManifest load_manifest(const std::string& path);
void save_manifest(const SequenceManifest& manifest, const std::string& path);

// Loss configuration from JSON with keys alpha, lvw_window, corr_weight,
// use_min_composite, use_lvw; missing keys keep their defaults.
LossConfig load_loss_config(const std::string& path);

}  // namespace uwd
