#include "uwdepth/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace uwd {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + " is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open file for writing: " + path);
  out << text;
  if (!out) throw InputError("failed writing file: " + path);
}

std::string resolve(const fs::path& base_dir, const std::string& rel) {
  const fs::path p(rel);
  return p.is_absolute() ? p.string() : (base_dir / p).string();
}

}  // namespace

IntrinsicsSpec load_intrinsics(const std::string& path) {
  const json j = read_json_file(path);
  try {
    IntrinsicsSpec spec;
    spec.K = CameraIntrinsics(j.at("fx").get<double>(), j.at("fy").get<double>(),
                              j.at("cx").get<double>(), j.at("cy").get<double>());
    spec.width = j.at("width").get<int>();
    spec.height = j.at("height").get<int>();
    if (spec.width < 1 || spec.height < 1)
      throw InputError("intrinsics file declares non-positive dimensions");
    return spec;
  } catch (const json::exception& e) {
    throw InputError(path + ": bad intrinsics file: " + e.what());
  }
}

void save_intrinsics(const IntrinsicsSpec& spec, const std::string& path) {
  json j{{"fx", spec.K.fx}, {"fy", spec.K.fy}, {"cx", spec.K.cx},
         {"cy", spec.K.cy}, {"width", spec.width}, {"height", spec.height}};
  write_text_file(path, j.dump(2) + "\n");
}

RigidPose load_pose(const std::string& path) {
  const json j = read_json_file(path);
  if (!j.is_array() || j.size() != 16)
    throw InputError(path +
                     ": pose file must be a 16-element row-major 4x4 matrix");
  Eigen::Matrix4d m;
  try {
    for (int i = 0; i < 16; ++i) m(i / 4, i % 4) = j.at(i).get<double>();
  } catch (const json::exception& e) {
    throw InputError(path + ": bad pose file: " + e.what());
  }
  try {
    return pose_from_matrix(m);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

void save_pose(const RigidPose& pose, const std::string& path) {
  const Eigen::Matrix4d m = pose.matrix();
  json j = json::array();
  for (int i = 0; i < 16; ++i) j.push_back(m(i / 4, i % 4));
  write_text_file(path, j.dump() + "\n");
}

SequenceManifest load_manifest(const std::string& path) {
  const json j = read_json_file(path);
  const fs::path base = fs::path(path).parent_path();

  SequenceManifest manifest;
  try {
    manifest.intrinsics_path = resolve(base, j.at("intrinsics").get<std::string>());
    if (j.contains("water"))
      manifest.water_preset = j.at("water").get<std::string>();

    double prev_ts = -std::numeric_limits<double>::infinity();
    for (const json& fj : j.at("frames")) {
      FrameRecord rec;
      rec.image_path = resolve(base, fj.at("image").get<std::string>());
      if (fj.contains("depth"))
        rec.depth_path = resolve(base, fj.at("depth").get<std::string>());
      if (fj.contains("pose"))
        rec.pose_path = resolve(base, fj.at("pose").get<std::string>());
      rec.timestamp = fj.at("timestamp").get<double>();
      if (!(rec.timestamp > prev_ts))
        throw InputError(path + ": timestamps must be strictly increasing");
      prev_ts = rec.timestamp;
      manifest.frames.push_back(std::move(rec));
    }
  } catch (const json::exception& e) {
    throw InputError(path + ": bad manifest: " + e.what());
  }
  if (manifest.frames.empty())
    throw InputError(path + ": manifest lists no frames");

  auto require_exists = [&](const std::string& p) {
    if (!p.empty() && !fs::exists(p))
      throw InputError(path + ": referenced file does not exist: " + p);
  };
  require_exists(manifest.intrinsics_path);
  for (const FrameRecord& rec : manifest.frames) {
    require_exists(rec.image_path);
    require_exists(rec.depth_path);
    require_exists(rec.pose_path);
  }
  return manifest;
}

void save_manifest(const SequenceManifest& manifest, const std::string& path) {
  const fs::path base = fs::path(path).parent_path();
  auto relativize = [&](const std::string& p) {
    if (p.empty()) return p;
    const fs::path fp(p);
    std::error_code ec;
    const fs::path rel = fs::relative(fp, base, ec);
    return ec ? fp.string() : rel.string();
  };

  json frames = json::array();
  for (const FrameRecord& rec : manifest.frames) {
    json fj{{"image", relativize(rec.image_path)},
            {"timestamp", rec.timestamp}};
    if (!rec.depth_path.empty()) fj["depth"] = relativize(rec.depth_path);
    if (!rec.pose_path.empty()) fj["pose"] = relativize(rec.pose_path);
    frames.push_back(std::move(fj));
  }
  json j{{"intrinsics", relativize(manifest.intrinsics_path)},
         {"frames", std::move(frames)}};
  if (manifest.water_preset) j["water"] = *manifest.water_preset;
  write_text_file(path, j.dump(2) + "\n");
}

LossConfig load_loss_config(const std::string& path) {
  const json j = read_json_file(path);
  LossConfig cfg;
  try {
    cfg.alpha = j.value("alpha", cfg.alpha);
    cfg.lvw_window = j.value("lvw_window", cfg.lvw_window);
    cfg.corr_weight = j.value("corr_weight", cfg.corr_weight);
    cfg.use_min_composite = j.value("use_min_composite", cfg.use_min_composite);
    cfg.use_lvw = j.value("use_lvw", cfg.use_lvw);
  } catch (const json::exception& e) {
    throw InputError(path + ": bad loss config: " + e.what());
  }
  cfg.validate();
  return cfg;
}

}  // namespace uwd
