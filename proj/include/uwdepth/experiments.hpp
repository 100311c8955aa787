#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "uwdepth/manifest.hpp"
#include "uwdepth/metrics.hpp"
#include "uwdepth/simulator.hpp"

namespace uwd {

// Runs fn(0..count-1) on up to `jobs` worker threads. Callers store results
// into per-index slots and reduce in index order afterwards, so the final
// numbers do not depend on scheduling.
void parallel_for(int jobs, std::size_t count,
                  const std::function<void(std::size_t)>& fn);

// Sequence frames loaded into memory.
struct LoadedSequence {
  IntrinsicsSpec intrinsics;
  std::vector<ImageBuffer> images;
  std::vector<DepthMap> depths;       // empty slot when the record had none
  std::vector<bool> has_depth;
  std::vector<RigidPose> poses;       // camera-to-world
  std::vector<bool> has_pose;
  std::vector<std::string> names;     // image file stems
};

LoadedSequence load_sequence(const SequenceManifest& manifest);

// Relative transform taking target-frame points into the source frame.
RigidPose relative_pose(const RigidPose& target_to_world,
                        const RigidPose& source_to_world);

struct LossRun {
  TotalLoss loss;
  std::vector<int> source_indices;
};

// Loss of one target frame against its temporal neighbors (frame±1).
LossRun run_loss(const LoadedSequence& seq, int frame_index,
                 const LossConfig& cfg);

// One row per independent-variable value.
struct ExperimentResult {
  std::string variable_name;
  std::vector<double> variable;
  std::vector<double> mean_loss;
  std::vector<std::size_t> counts;
  LossConfig cfg;
};

// Mean single-source loss over all (t, t-gap) pairs for gap = 1..max_gap.
ExperimentResult run_frame_gap(const LoadedSequence& seq, int max_gap,
                               const LossConfig& cfg, int jobs = 1);

// Mean neighbor loss over the sequence for each alpha.
ExperimentResult run_alpha_sweep(const LoadedSequence& seq,
                                 const std::vector<double>& alphas,
                                 const LossConfig& cfg, int jobs = 1);

struct UlapCorrResult {
  double pooled_r = 0.0;
  std::vector<double> per_frame_r;  // NaN where a single frame is degenerate
  std::vector<std::pair<double, double>> scatter;  // (depth, prior) samples
};

// Pearson correlation between the attenuation prior and ground-truth depth,
// pooled over every valid pixel plus per-frame coefficients, with a seeded
// reservoir subsample for plotting.
UlapCorrResult run_ulap_corr(const LoadedSequence& seq,
                             std::size_t scatter_samples = 2000,
                             std::uint64_t seed = 0, int jobs = 1);

// Renders the scene and writes frame_%04d.png / .pfm / _pose.json files,
// intrinsics.json, and manifest.json into out_dir. Returns the manifest path.
std::string run_synth(const SyntheticScene& scene, const std::string& out_dir);

struct MetricsBatch {
  std::vector<std::string> names;
  std::vector<MetricReport> per_frame;
  MetricReport aggregate;  // arithmetic mean of the per-frame reports
};

// Evaluates predicted depth maps (PFM files named like the ground-truth
// depth files) against the manifest's ground truth. Background masks, when
// a directory is given, are PNGs named after the image stems; bg_error is
// reported iff masks are provided.
MetricsBatch run_metrics(const SequenceManifest& manifest,
                         const std::string& pred_dir,
                         const std::optional<std::string>& bg_mask_dir,
                         std::optional<double> max_depth, int jobs = 1);

// CSV emitters. Every file starts with a "# uwdepth-csv v1" schema comment.
void write_experiment_csv(const ExperimentResult& result,
                          const std::string& path);
void write_ulap_csv(const UlapCorrResult& result,
                    const std::vector<std::string>& names,
                    const std::string& path);
void write_ulap_scatter_csv(const UlapCorrResult& result,
                            const std::string& path);
void write_metrics_csv(const MetricsBatch& batch, const std::string& path);

// Minimal standalone SVG line chart of an experiment curve.
void write_experiment_svg(const ExperimentResult& result,
                          const std::string& path);

std::string format_double(double v);

}  // namespace uwd
