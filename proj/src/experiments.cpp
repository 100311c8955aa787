#include "uwdepth/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "uwdepth/io.hpp"

namespace fs = std::filesystem;

namespace uwd {

void parallel_for(int jobs, std::size_t count,
                  const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  const std::size_t workers =
      std::min<std::size_t>(std::max(jobs, 1), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

LoadedSequence load_sequence(const SequenceManifest& manifest) {
  LoadedSequence seq;
  seq.intrinsics = load_intrinsics(manifest.intrinsics_path);
  const std::size_t n = manifest.frames.size();
  seq.images.resize(n);
  seq.depths.resize(n);
  seq.has_depth.assign(n, false);
  seq.poses.resize(n);
  seq.has_pose.assign(n, false);
  seq.names.resize(n);

  for (std::size_t i = 0; i < n; ++i) {
    const FrameRecord& rec = manifest.frames[i];
    seq.names[i] = fs::path(rec.image_path).stem().string();
    seq.images[i] = load_image(rec.image_path);
    if (seq.images[i].width != seq.intrinsics.width ||
        seq.images[i].height != seq.intrinsics.height)
      throw InputError("image size does not match the intrinsics file: " +
                       rec.image_path);
    if (!rec.depth_path.empty()) {
      seq.depths[i] = load_depth(rec.depth_path);
      if (seq.depths[i].width != seq.images[i].width ||
          seq.depths[i].height != seq.images[i].height)
        throw InputError("depth size does not match its image: " +
                         rec.depth_path);
      seq.has_depth[i] = true;
    }
    if (!rec.pose_path.empty()) {
      seq.poses[i] = load_pose(rec.pose_path);
      seq.has_pose[i] = true;
    }
  }
  return seq;
}

RigidPose relative_pose(const RigidPose& target_to_world,
                        const RigidPose& source_to_world) {
  return compose(invert(source_to_world), target_to_world);
}

namespace {

void require_depth(const LoadedSequence& seq, std::size_t i) {
  if (!seq.has_depth[i])
    throw InputError("frame " + seq.names[i] + " has no depth map");
}

void require_pose(const LoadedSequence& seq, std::size_t i) {
  if (!seq.has_pose[i])
    throw InputError("frame " + seq.names[i] + " has no pose");
}

TotalLoss pair_or_neighbor_loss(const LoadedSequence& seq, int target,
                                const std::vector<int>& sources,
                                const LossConfig& cfg) {
  std::vector<ImageBuffer> imgs;
  std::vector<RigidPose> rel;
  imgs.reserve(sources.size());
  rel.reserve(sources.size());
  for (int s : sources) {
    imgs.push_back(seq.images[s]);
    rel.push_back(relative_pose(seq.poses[target], seq.poses[s]));
  }
  return total_loss(seq.images[target], imgs, seq.depths[target], rel,
                    seq.intrinsics.K, cfg);
}

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / xs.size();
}

}  // namespace

LossRun run_loss(const LoadedSequence& seq, int frame_index,
                 const LossConfig& cfg) {
  cfg.validate();
  const int n = static_cast<int>(seq.images.size());
  if (frame_index < 0 || frame_index >= n)
    throw InputError("frame index out of range");
  require_depth(seq, frame_index);
  require_pose(seq, frame_index);

  LossRun run;
  for (int s : {frame_index - 1, frame_index + 1}) {
    if (s < 0 || s >= n) continue;
    require_pose(seq, s);
    run.source_indices.push_back(s);
  }
  if (run.source_indices.empty())
    throw InputError("frame has no temporal neighbor");
  run.loss = pair_or_neighbor_loss(seq, frame_index, run.source_indices, cfg);
  return run;
}

ExperimentResult run_frame_gap(const LoadedSequence& seq, int max_gap,
                               const LossConfig& cfg, int jobs) {
  cfg.validate();
  const int n = static_cast<int>(seq.images.size());
  if (max_gap < 1) throw InputError("max gap must be >= 1");
  if (max_gap >= n)
    throw InputError("max gap must be smaller than the sequence length");
  for (int i = 0; i < n; ++i) {
    require_pose(seq, i);
    if (i >= 1) require_depth(seq, i);
  }

  struct Item {
    int gap, target;
  };
  std::vector<Item> items;
  for (int gap = 1; gap <= max_gap; ++gap)
    for (int t = gap; t < n; ++t) items.push_back({gap, t});

  std::vector<double> losses(items.size());
  parallel_for(jobs, items.size(), [&](std::size_t i) {
    const Item& it = items[i];
    losses[i] =
        pair_or_neighbor_loss(seq, it.target, {it.target - it.gap}, cfg).value;
  });

  ExperimentResult result;
  result.variable_name = "gap";
  result.cfg = cfg;
  for (int gap = 1; gap <= max_gap; ++gap) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (items[i].gap != gap) continue;
      sum += losses[i];
      ++count;
    }
    result.variable.push_back(gap);
    result.mean_loss.push_back(sum / count);
    result.counts.push_back(count);
  }
  return result;
}

ExperimentResult run_alpha_sweep(const LoadedSequence& seq,
                                 const std::vector<double>& alphas,
                                 const LossConfig& cfg, int jobs) {
  cfg.validate();
  if (alphas.empty()) throw InputError("alpha sweep needs at least one value");
  for (double a : alphas)
    if (!(a >= 0.0 && a <= 1.0))
      throw InputError("alpha values must lie in [0, 1]");
  const int n = static_cast<int>(seq.images.size());
  if (n < 2) throw InputError("alpha sweep needs at least two frames");

  struct Item {
    std::size_t alpha_index;
    int target;
  };
  std::vector<Item> items;
  for (std::size_t a = 0; a < alphas.size(); ++a)
    for (int t = 0; t < n; ++t) items.push_back({a, t});

  std::vector<double> losses(items.size());
  parallel_for(jobs, items.size(), [&](std::size_t i) {
    LossConfig local = cfg;
    local.alpha = alphas[items[i].alpha_index];
    losses[i] = run_loss(seq, items[i].target, local).loss.value;
  });

  ExperimentResult result;
  result.variable_name = "alpha";
  result.cfg = cfg;
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    std::vector<double> per_alpha;
    for (std::size_t i = 0; i < items.size(); ++i)
      if (items[i].alpha_index == a) per_alpha.push_back(losses[i]);
    result.variable.push_back(alphas[a]);
    result.mean_loss.push_back(mean_of(per_alpha));
    result.counts.push_back(per_alpha.size());
  }
  return result;
}

UlapCorrResult run_ulap_corr(const LoadedSequence& seq,
                             std::size_t scatter_samples, std::uint64_t seed,
                             int jobs) {
  const std::size_t n = seq.images.size();
  if (n == 0) throw InputError("empty sequence");
  for (std::size_t i = 0; i < n; ++i) require_depth(seq, i);

  struct Sums {
    double n = 0, d = 0, u = 0, dd = 0, uu = 0, du = 0;
  };
  std::vector<Sums> frame_sums(n);
  std::vector<ScalarMap> priors(n);
  parallel_for(jobs, n, [&](std::size_t i) {
    priors[i] = ulap(seq.images[i]);
    const DepthMap& depth = seq.depths[i];
    Sums& s = frame_sums[i];
    for (std::size_t p = 0; p < depth.data.size(); ++p) {
      if (!depth.validity[p]) continue;
      const double d = depth.data[p];
      const double u = priors[i].values[p];
      s.n += 1;
      s.d += d;
      s.u += u;
      s.dd += d * d;
      s.uu += u * u;
      s.du += d * u;
    }
  });

  auto pearson = [](const Sums& s) {
    const double cov = s.n * s.du - s.d * s.u;
    const double var_d = s.n * s.dd - s.d * s.d;
    const double var_u = s.n * s.uu - s.u * s.u;
    if (s.n < 2 || var_d <= 0.0 || var_u <= 0.0)
      return std::numeric_limits<double>::quiet_NaN();
    return cov / std::sqrt(var_d * var_u);
  };

  UlapCorrResult result;
  Sums pooled;
  for (const Sums& s : frame_sums) {
    pooled.n += s.n;
    pooled.d += s.d;
    pooled.u += s.u;
    pooled.dd += s.dd;
    pooled.uu += s.uu;
    pooled.du += s.du;
    result.per_frame_r.push_back(pearson(s));
  }
  result.pooled_r = pearson(pooled);
  if (std::isnan(result.pooled_r))
    throw DegeneracyError(
        "depth/prior correlation is undefined: a pooled variable is constant");

  // Seeded reservoir subsample of the pooled (depth, prior) pairs.
  std::mt19937_64 rng(seed);
  std::size_t seen = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const DepthMap& depth = seq.depths[i];
    for (std::size_t p = 0; p < depth.data.size(); ++p) {
      if (!depth.validity[p]) continue;
      const std::pair<double, double> sample{depth.data[p],
                                             priors[i].values[p]};
      if (result.scatter.size() < scatter_samples) {
        result.scatter.push_back(sample);
      } else if (scatter_samples > 0) {
        std::uniform_int_distribution<std::size_t> pick(0, seen);
        const std::size_t j = pick(rng);
        if (j < scatter_samples) result.scatter[j] = sample;
      }
      ++seen;
    }
  }
  return result;
}

std::string run_synth(const SyntheticScene& scene, const std::string& out_dir) {
  fs::create_directories(out_dir);
  const std::vector<RenderedFrame> frames = render_sequence(scene);

  SequenceManifest manifest;
  for (std::size_t f = 0; f < frames.size(); ++f) {
    char stem[32];
    std::snprintf(stem, sizeof(stem), "frame_%04zu", f);
    FrameRecord rec;
    rec.image_path = (fs::path(out_dir) / (std::string(stem) + ".png")).string();
    rec.depth_path = (fs::path(out_dir) / (std::string(stem) + ".pfm")).string();
    rec.pose_path =
        (fs::path(out_dir) / (std::string(stem) + "_pose.json")).string();
    rec.timestamp = static_cast<double>(f);
    save_image(frames[f].image, rec.image_path, 8);
    save_depth(frames[f].depth, rec.depth_path);
    save_pose(frames[f].pose, rec.pose_path);
    manifest.frames.push_back(rec);
  }

  IntrinsicsSpec spec;
  spec.K = scene.intrinsics;
  spec.width = scene.width;
  spec.height = scene.height;
  const std::string intrinsics_path =
      (fs::path(out_dir) / "intrinsics.json").string();
  save_intrinsics(spec, intrinsics_path);
  manifest.intrinsics_path = intrinsics_path;
  if (!scene.water_preset.empty()) manifest.water_preset = scene.water_preset;

  const std::string manifest_path =
      (fs::path(out_dir) / "manifest.json").string();
  save_manifest(manifest, manifest_path);
  return manifest_path;
}

MetricsBatch run_metrics(const SequenceManifest& manifest,
                         const std::string& pred_dir,
                         const std::optional<std::string>& bg_mask_dir,
                         std::optional<double> max_depth, int jobs) {
  const std::size_t n = manifest.frames.size();
  if (n == 0) throw InputError("empty sequence");

  MetricsBatch batch;
  batch.names.resize(n);
  batch.per_frame.resize(n);

  parallel_for(jobs, n, [&](std::size_t i) {
    const FrameRecord& rec = manifest.frames[i];
    if (rec.depth_path.empty())
      throw InputError("frame " + fs::path(rec.image_path).stem().string() +
                       " has no ground-truth depth");
    batch.names[i] = fs::path(rec.depth_path).stem().string();
    const DepthMap gt = load_depth(rec.depth_path);
    const std::string pred_path =
        (fs::path(pred_dir) / fs::path(rec.depth_path).filename()).string();
    const DepthMap pred = load_depth(pred_path);
    MetricReport report = depth_metrics(pred, gt, max_depth);

    if (bg_mask_dir) {
      const std::string mask_path =
          (fs::path(*bg_mask_dir) /
           (fs::path(rec.image_path).stem().string() + ".png"))
              .string();
      const ImageBuffer mask_img = load_image(mask_path);
      if (mask_img.width != pred.width || mask_img.height != pred.height)
        throw InputError("background mask size mismatch: " + mask_path);
      PixelMask mask(pred.height, pred.width, false);
      for (int y = 0; y < pred.height; ++y)
        for (int x = 0; x < pred.width; ++x)
          mask.set(y, x, mask_img.at(y, x, 0) > 0.5);
      const DepthMap scaled = median_scale(pred, gt).first;
      report.bg_error =
          bg_error({disparity_from_depth(scaled)}, {mask});
    }
    batch.per_frame[i] = report;
  });

  MetricReport& agg = batch.aggregate;
  double bg_sum = 0.0;
  for (const MetricReport& r : batch.per_frame) {
    agg.abs_rel += r.abs_rel;
    agg.sq_rel += r.sq_rel;
    agg.rmse += r.rmse;
    agg.rmse_log += r.rmse_log;
    agg.delta1 += r.delta1;
    agg.delta2 += r.delta2;
    agg.delta3 += r.delta3;
    agg.pixel_count += r.pixel_count;
    if (r.bg_error) bg_sum += *r.bg_error;
  }
  const double dn = static_cast<double>(n);
  agg.abs_rel /= dn;
  agg.sq_rel /= dn;
  agg.rmse /= dn;
  agg.rmse_log /= dn;
  agg.delta1 /= dn;
  agg.delta2 /= dn;
  agg.delta3 /= dn;
  if (bg_mask_dir) agg.bg_error = bg_sum / dn;
  return batch;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

namespace {

std::ofstream open_csv(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open output file: " + path);
  out << "# uwdepth-csv v1\n";
  return out;
}

}  // namespace

void write_experiment_csv(const ExperimentResult& result,
                          const std::string& path) {
  std::ofstream out = open_csv(path);
  out << result.variable_name << ",mean_loss,count\n";
  for (std::size_t i = 0; i < result.variable.size(); ++i)
    out << format_double(result.variable[i]) << ','
        << format_double(result.mean_loss[i]) << ',' << result.counts[i]
        << '\n';
}

void write_ulap_csv(const UlapCorrResult& result,
                    const std::vector<std::string>& names,
                    const std::string& path) {
  std::ofstream out = open_csv(path);
  out << "# pooled_r " << format_double(result.pooled_r) << '\n';
  out << "frame,pearson_r\n";
  for (std::size_t i = 0; i < result.per_frame_r.size(); ++i)
    out << names[i] << ',' << format_double(result.per_frame_r[i]) << '\n';
}

void write_ulap_scatter_csv(const UlapCorrResult& result,
                            const std::string& path) {
  std::ofstream out = open_csv(path);
  out << "depth,prior\n";
  for (const auto& [d, u] : result.scatter)
    out << format_double(d) << ',' << format_double(u) << '\n';
}

void write_metrics_csv(const MetricsBatch& batch, const std::string& path) {
  std::ofstream out = open_csv(path);
  out << "frame,abs_rel,sq_rel,rmse,rmse_log,delta1,delta2,delta3,bg_error,"
         "pixels\n";
  auto row = [&](const std::string& name, const MetricReport& r) {
    out << name << ',' << format_double(r.abs_rel) << ','
        << format_double(r.sq_rel) << ',' << format_double(r.rmse) << ','
        << format_double(r.rmse_log) << ',' << format_double(r.delta1) << ','
        << format_double(r.delta2) << ',' << format_double(r.delta3) << ',';
    if (r.bg_error) out << format_double(*r.bg_error);
    out << ',' << r.pixel_count << '\n';
  };
  for (std::size_t i = 0; i < batch.per_frame.size(); ++i)
    row(batch.names[i], batch.per_frame[i]);
  row("aggregate", batch.aggregate);
}

void write_experiment_svg(const ExperimentResult& result,
                          const std::string& path) {
  if (result.variable.empty()) throw InputError("empty experiment result");
  std::ofstream out(path);
  if (!out) throw InputError("cannot open output file: " + path);

  const double W = 640, H = 400;
  const double left = 70, right = 20, top = 20, bottom = 50;
  auto min_max = [](const std::vector<double>& v) {
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    double a = *lo, b = *hi;
    if (b - a < 1e-12) {
      a -= 0.5;
      b += 0.5;
    }
    return std::pair<double, double>{a, b};
  };
  const auto [x0, x1] = min_max(result.variable);
  const auto [y0, y1] = min_max(result.mean_loss);
  auto px = [&](double x) {
    return left + (x - x0) / (x1 - x0) * (W - left - right);
  };
  auto py = [&](double y) {
    return H - bottom - (y - y0) / (y1 - y0) * (H - top - bottom);
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << ' ' << H
      << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << H - bottom << "\" x2=\""
      << W - right << "\" y2=\"" << H - bottom
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left
      << "\" y2=\"" << H - bottom << "\" stroke=\"black\"/>\n";
  out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" "
         "points=\"";
  for (std::size_t i = 0; i < result.variable.size(); ++i)
    out << px(result.variable[i]) << ',' << py(result.mean_loss[i]) << ' ';
  out << "\"/>\n";
  for (std::size_t i = 0; i < result.variable.size(); ++i)
    out << "<circle cx=\"" << px(result.variable[i]) << "\" cy=\""
        << py(result.mean_loss[i]) << "\" r=\"3\" fill=\"#1f77b4\"/>\n";
  out << "<text x=\"" << (left + W - right) / 2 << "\" y=\"" << H - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\">"
      << result.variable_name << "</text>\n";
  out << "<text x=\"" << left - 8 << "\" y=\"" << H - bottom + 4
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << format_double(y0) << "</text>\n";
  out << "<text x=\"" << left - 8 << "\" y=\"" << top + 4
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << format_double(y1) << "</text>\n";
  out << "<text x=\"" << left << "\" y=\"" << H - bottom + 18
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"11\">"
      << format_double(x0) << "</text>\n";
  out << "<text x=\"" << W - right << "\" y=\"" << H - bottom + 18
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"11\">"
      << format_double(x1) << "</text>\n";
  out << "</svg>\n";
}

}  // namespace uwd
