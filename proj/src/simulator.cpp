#include "uwdepth/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "noise.hpp"

namespace uwd {

namespace {

using nlohmann::json;

struct PlaneBasis {
  Eigen::Vector3d n, e1, e2;
};

PlaneBasis plane_basis(const ScenePlane& plane) {
  PlaneBasis b;
  const double len = plane.normal.norm();
  if (len <= 0.0) throw InputError("plane normal must be non-zero");
  b.n = plane.normal / len;
  const Eigen::Vector3d up =
      std::abs(b.n.y()) < 0.9 ? Eigen::Vector3d(0, 1, 0) : Eigen::Vector3d(1, 0, 0);
  b.e1 = up.cross(b.n).normalized();
  b.e2 = b.n.cross(b.e1);
  return b;
}

double texture_value(const PlaneTexture& tex, double s, double t, int channel) {
  const double n0 = detail::fractal_noise(s * tex.scale, t * tex.scale,
                                          tex.seed, tex.octaves);
  double v = tex.base + tex.contrast * (2.0 * n0 - 1.0);
  if (tex.colored) {
    const double nc =
        detail::fractal_noise(s * tex.scale, t * tex.scale,
                              tex.seed + 0xb5297a4dull * (channel + 1), 2);
    v += 0.5 * tex.contrast * (2.0 * nc - 1.0);
  }
  return clamp01(v);
}

void check_positive_depth(const SyntheticScene& scene) {
  for (std::size_t f = 0; f < scene.trajectory.size(); ++f) {
    const RigidPose cam_from_world = invert(scene.trajectory[f]);
    for (const ScenePlane& plane : scene.planes) {
      const PlaneBasis b = plane_basis(plane);
      for (int sx : {-1, 1}) {
        for (int sy : {-1, 1}) {
          const Eigen::Vector3d corner = plane.center +
                                         sx * plane.half_width * b.e1 +
                                         sy * plane.half_height * b.e2;
          if (cam_from_world.apply(corner).z() <= 0.0) {
            std::ostringstream msg;
            msg << "scene geometry leaves the positive-depth half-space at "
                   "frame "
                << f;
            throw InputError(msg.str());
          }
        }
      }
    }
  }
}

Eigen::Vector3d parse_vec3(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3)
    throw InputError(std::string("scene config: ") + what +
                     " must be a 3-element array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

std::vector<RigidPose> velocity_trajectory(int frames,
                                           const Eigen::Vector3d& linear,
                                           const Eigen::Vector3d& angular) {
  if (frames < 1) throw InputError("trajectory needs at least one frame");
  RigidPose step;
  const double angle = angular.norm();
  if (angle > 0.0)
    step.rotation = Eigen::AngleAxisd(angle, angular / angle).toRotationMatrix();
  step.translation = linear;

  std::vector<RigidPose> poses;
  poses.reserve(frames);
  RigidPose current = RigidPose::identity();
  for (int i = 0; i < frames; ++i) {
    poses.push_back(current);
    current = compose(current, step);
  }
  return poses;
}

SyntheticScene scene_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("scene config is not valid JSON: ") + e.what());
  }

  SyntheticScene scene;
  try {
    scene.seed = j.value("seed", std::uint64_t{0});
    scene.width = j.value("width", 320);
    scene.height = j.value("height", 240);
    if (scene.width < 1 || scene.height < 1)
      throw InputError("scene config: image dimensions must be >= 1");

    if (j.contains("intrinsics")) {
      const json& k = j.at("intrinsics");
      scene.intrinsics = CameraIntrinsics(
          k.at("fx").get<double>(), k.at("fy").get<double>(),
          k.at("cx").get<double>(), k.at("cy").get<double>());
    } else {
      scene.intrinsics = CameraIntrinsics(0.8 * scene.width, 0.8 * scene.width,
                                          (scene.width - 1) / 2.0,
                                          (scene.height - 1) / 2.0);
    }

    if (j.contains("water")) {
      const json& w = j.at("water");
      if (w.is_string()) {
        scene.water_preset = w.get<std::string>();
        scene.water = water_preset(scene.water_preset);
      } else {
        const auto chi = w.at("chi");
        const auto amb = w.at("ambient");
        for (int c = 0; c < 3; ++c) {
          scene.water.chi[c] = chi.at(c).get<double>();
          scene.water.ambient[c] = amb.at(c).get<double>();
        }
      }
    }
    scene.water.validate();
    scene.noise_std = j.value("noise_std", 0.0);
    if (scene.noise_std < 0.0)
      throw InputError("scene config: noise_std must be >= 0");

    if (j.contains("illumination")) {
      const json& il = j.at("illumination");
      scene.illumination.enabled = il.value("enabled", true);
      scene.illumination.strength = il.value("strength", 0.25);
      scene.illumination.scale = il.value("scale", 0.02);
      scene.illumination.seed = il.value("seed", std::uint64_t{0});
      if (scene.illumination.strength < 0.0 || scene.illumination.strength > 1.0)
        throw InputError("scene config: illumination strength must lie in [0, 1]");
    }

    if (!j.contains("planes") || !j.at("planes").is_array() ||
        j.at("planes").empty())
      throw InputError("scene config: at least one plane is required");
    for (const json& p : j.at("planes")) {
      ScenePlane plane;
      plane.center = parse_vec3(p.at("center"), "plane center");
      if (p.contains("normal")) plane.normal = parse_vec3(p.at("normal"), "plane normal");
      if (p.contains("half_extent")) {
        const json& he = p.at("half_extent");
        plane.half_width = he.at(0).get<double>();
        plane.half_height = he.at(1).get<double>();
      }
      if (plane.half_width <= 0.0 || plane.half_height <= 0.0)
        throw InputError("scene config: plane half_extent must be positive");
      if (p.contains("texture")) {
        const json& t = p.at("texture");
        plane.texture.seed = t.value("seed", std::uint64_t{1});
        plane.texture.scale = t.value("scale", 1.5);
        plane.texture.contrast = t.value("contrast", 0.3);
        plane.texture.base = t.value("base", 0.55);
        plane.texture.octaves = t.value("octaves", 4);
        plane.texture.colored = t.value("colored", false);
        if (plane.texture.octaves < 1 || plane.texture.scale <= 0.0)
          throw InputError("scene config: bad texture parameters");
      }
      scene.planes.push_back(plane);
    }

    const json& traj = j.at("trajectory");
    if (traj.contains("poses")) {
      for (const json& pj : traj.at("poses")) {
        if (!pj.is_array() || pj.size() != 16)
          throw InputError(
              "scene config: trajectory poses must be 16-element row-major "
              "arrays");
        Eigen::Matrix4d m;
        for (int i = 0; i < 16; ++i) m(i / 4, i % 4) = pj[i].get<double>();
        scene.trajectory.push_back(pose_from_matrix(m));
      }
      if (scene.trajectory.empty())
        throw InputError("scene config: trajectory pose list is empty");
    } else {
      const int frames = traj.value("frames", 1);
      const Eigen::Vector3d linear =
          traj.contains("linear") ? parse_vec3(traj.at("linear"), "linear velocity")
                                  : Eigen::Vector3d::Zero();
      const Eigen::Vector3d angular =
          traj.contains("angular")
              ? parse_vec3(traj.at("angular"), "angular velocity")
              : Eigen::Vector3d::Zero();
      scene.trajectory = velocity_trajectory(frames, linear, angular);
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("scene config schema violation: ") + e.what());
  }
  return scene;
}

SyntheticScene load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open scene config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return scene_from_json_text(buf.str());
}

std::vector<RenderedFrame> render_sequence(const SyntheticScene& scene,
                                           const WaterProperties& water,
                                           double noise_std) {
  if (scene.trajectory.empty())
    throw InputError("render_sequence: empty trajectory");
  if (scene.planes.empty())
    throw InputError("render_sequence: scene has no geometry");
  water.validate();
  if (noise_std < 0.0) throw InputError("noise_std must be >= 0");
  check_positive_depth(scene);

  std::vector<PlaneBasis> bases;
  bases.reserve(scene.planes.size());
  for (const ScenePlane& p : scene.planes) bases.push_back(plane_basis(p));

  const CameraIntrinsics& K = scene.intrinsics;
  const int W = scene.width;
  const int H = scene.height;

  std::vector<RenderedFrame> frames;
  frames.reserve(scene.trajectory.size());

  for (std::size_t f = 0; f < scene.trajectory.size(); ++f) {
    const RigidPose& cam_to_world = scene.trajectory[f];
    RenderedFrame frame;
    frame.pose = cam_to_world;
    frame.depth = DepthMap(H, W);
    frame.clear_image = ImageBuffer(H, W, 3);

    const Eigen::Vector3d origin = cam_to_world.translation;
    for (int y = 0; y < H; ++y) {
      for (int x = 0; x < W; ++x) {
        const Eigen::Vector3d dir_cam((x - K.cx) / K.fx, (y - K.cy) / K.fy, 1.0);
        const Eigen::Vector3d dir = cam_to_world.rotation * dir_cam;

        // dir_cam.z == 1, so the ray parameter is the camera-frame z range.
        double best_t = std::numeric_limits<double>::infinity();
        int best = -1;
        double best_s1 = 0.0, best_s2 = 0.0;
        for (std::size_t p = 0; p < scene.planes.size(); ++p) {
          const ScenePlane& plane = scene.planes[p];
          const PlaneBasis& b = bases[p];
          const double denom = b.n.dot(dir);
          if (std::abs(denom) < 1e-12) continue;
          const double t = b.n.dot(plane.center - origin) / denom;
          if (t <= kNearClip || t >= best_t) continue;
          const Eigen::Vector3d local = origin + t * dir - plane.center;
          const double s1 = b.e1.dot(local);
          const double s2 = b.e2.dot(local);
          if (std::abs(s1) > plane.half_width || std::abs(s2) > plane.half_height)
            continue;
          best_t = t;
          best = static_cast<int>(p);
          best_s1 = s1;
          best_s2 = s2;
        }

        if (best >= 0) {
          frame.depth.set(y, x, best_t);
          for (int c = 0; c < 3; ++c)
            frame.clear_image.at(y, x, c) =
                texture_value(scene.planes[best].texture, best_s1, best_s2, c);
        } else {
          frame.depth.set_invalid(y, x);
          for (int c = 0; c < 3; ++c)
            frame.clear_image.at(y, x, c) = water.ambient[c];
        }
      }
    }

    if (scene.illumination.enabled) {
      const std::uint64_t il_seed =
          detail::mix64(scene.illumination.seed ^ scene.seed ^
                        (0x9d5ul + f * 0x100000001b3ull));
      for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
          const double field = detail::value_noise(
              x * scene.illumination.scale, y * scene.illumination.scale, il_seed);
          const double gain =
              1.0 + scene.illumination.strength * (2.0 * field - 1.0);
          for (int c = 0; c < 3; ++c)
            frame.clear_image.at(y, x, c) =
                clamp01(frame.clear_image.at(y, x, c) * gain);
        }
      }
    }

    frame.image = apply_medium(frame.clear_image, frame.depth, water);

    if (noise_std > 0.0) {
      std::mt19937_64 rng(detail::mix64(scene.seed ^ (f + 0x5e4d ) * 0x9e3779b97f4a7c15ull));
      std::normal_distribution<double> gauss(0.0, noise_std);
      for (double& v : frame.image.data) v = clamp01(v + gauss(rng));
    } else {
      for (double& v : frame.image.data) v = clamp01(v);
    }
    frames.push_back(std::move(frame));
  }
  return frames;
}

std::vector<RenderedFrame> render_sequence(const SyntheticScene& scene) {
  return render_sequence(scene, scene.water, scene.noise_std);
}

PixelMask background_region(const DepthMap& depth, double horizon) {
  PixelMask mask(depth.height, depth.width, false);
  for (std::size_t i = 0; i < depth.data.size(); ++i)
    mask.data[i] = (!depth.validity[i] || depth.data[i] > horizon) ? 1 : 0;
  return mask;
}

}  // namespace uwd
