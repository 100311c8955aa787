// Command-line front end: synthetic data generation, loss evaluation, the
// frame-gap / alpha-sweep / prior-correlation experiments, homomorphic
// augmentation, and depth-metric batch runs.
//
// Exit codes: 0 success, 2 input error, 3 numeric degeneracy.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uwdepth/errors.hpp"
#include "uwdepth/experiments.hpp"
#include "uwdepth/homomorphic.hpp"
#include "uwdepth/io.hpp"
#include "uwdepth/manifest.hpp"
#include "uwdepth/simulator.hpp"

namespace fs = std::filesystem;
using namespace uwd;

namespace {

struct GlobalArgs {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int jobs = 1;
};

LossConfig resolve_config(const GlobalArgs& g) {
  if (g.config_path.empty()) return LossConfig{};
  return load_loss_config(g.config_path);
}

std::string require_out(const GlobalArgs& g) {
  if (g.out_dir.empty())
    throw InputError("this command writes files: pass --out <dir>");
  fs::create_directories(g.out_dir);
  return g.out_dir;
}

std::string out_path(const GlobalArgs& g, const std::string& name) {
  return (fs::path(require_out(g)) / name).string();
}

// Grayscale visualization of a scalar map: valid values scaled by the map
// maximum, invalid pixels black.
ImageBuffer visualize(const ScalarMap& map) {
  double peak = 0.0;
  for (std::size_t i = 0; i < map.values.size(); ++i)
    if (map.valid[i]) peak = std::max(peak, map.values[i]);
  if (peak <= 0.0) peak = 1.0;
  ImageBuffer img(map.height, map.width, 1);
  for (std::size_t i = 0; i < map.values.size(); ++i)
    img.data[i] = map.valid[i] ? clamp01(map.values[i] / peak) : 0.0;
  return img;
}

void print_experiment(const ExperimentResult& r) {
  for (std::size_t i = 0; i < r.variable.size(); ++i)
    std::cout << r.variable_name << ' ' << format_double(r.variable[i])
              << "  mean_loss " << format_double(r.mean_loss[i]) << "  n "
              << r.counts[i] << '\n';
}

void cmd_synth(const GlobalArgs& g, const std::string& scene_path) {
  SyntheticScene scene = load_scene(scene_path);
  if (g.seed_given) scene.seed = g.seed;
  const std::string manifest_path = run_synth(scene, require_out(g));
  std::cout << "frames " << scene.trajectory.size() << '\n'
            << "manifest " << manifest_path << '\n';
}

void cmd_loss(const GlobalArgs& g, const std::string& seq_path,
              int frame_index) {
  const LossConfig cfg = resolve_config(g);
  const LoadedSequence seq = load_sequence(load_manifest(seq_path));
  const LossRun run = run_loss(seq, frame_index, cfg);

  std::cout << "loss " << format_double(run.loss.value) << '\n'
            << "photometric " << format_double(run.loss.photometric) << '\n'
            << "correlation " << format_double(run.loss.correlation) << '\n';
  std::cout << "sources";
  for (int s : run.source_indices) std::cout << ' ' << seq.names[s];
  std::cout << '\n';

  if (!g.out_dir.empty()) {
    save_image(visualize(run.loss.map), out_path(g, "loss_map.png"), 8);
    if (run.loss.lvw_mask.height > 0)
      save_image(visualize(run.loss.lvw_mask), out_path(g, "lvw_mask.png"), 8);
  }
}

void cmd_frame_gap(const GlobalArgs& g, const std::string& seq_path,
                   int max_gap, bool svg) {
  const LossConfig cfg = resolve_config(g);
  const LoadedSequence seq = load_sequence(load_manifest(seq_path));
  const ExperimentResult r = run_frame_gap(seq, max_gap, cfg, g.jobs);
  print_experiment(r);
  write_experiment_csv(r, out_path(g, "frame_gap.csv"));
  if (svg) write_experiment_svg(r, out_path(g, "frame_gap.svg"));
}

void cmd_alpha_sweep(const GlobalArgs& g, const std::string& seq_path,
                     const std::vector<double>& alphas, bool svg) {
  const LossConfig cfg = resolve_config(g);
  const LoadedSequence seq = load_sequence(load_manifest(seq_path));
  const ExperimentResult r = run_alpha_sweep(seq, alphas, cfg, g.jobs);
  print_experiment(r);
  write_experiment_csv(r, out_path(g, "alpha_sweep.csv"));
  if (svg) write_experiment_svg(r, out_path(g, "alpha_sweep.svg"));
}

void cmd_ulap_corr(const GlobalArgs& g, const std::string& seq_path,
                   std::size_t samples) {
  const LoadedSequence seq = load_sequence(load_manifest(seq_path));
  const UlapCorrResult r = run_ulap_corr(seq, samples, g.seed, g.jobs);
  std::cout << "pooled_r " << format_double(r.pooled_r) << '\n';
  for (std::size_t i = 0; i < r.per_frame_r.size(); ++i)
    std::cout << seq.names[i] << ' ' << format_double(r.per_frame_r[i])
              << '\n';
  write_ulap_csv(r, seq.names, out_path(g, "ulap_corr.csv"));
  write_ulap_scatter_csv(r, out_path(g, "ulap_scatter.csv"));
}

double parse_cutoff(const std::string& f0) {
  if (f0 == "random") return -1.0;
  try {
    std::size_t pos = 0;
    const double v = std::stod(f0, &pos);
    if (pos != f0.size()) throw std::invalid_argument(f0);
    return v;
  } catch (const std::exception&) {
    throw InputError("--f0 expects a number or 'random'");
  }
}

void augment_one(const ImageBuffer& img, const std::string& dst, double cutoff,
                 std::uint64_t seed, int order, const std::string& label) {
  double used = cutoff;
  ImageBuffer result;
  if (cutoff < 0.0) {
    AugmentResult r = augment(img, seed, order);
    result = std::move(r.image);
    used = r.cutoff;
  } else {
    HomomorphicParams params{cutoff, order};
    result = homomorphic_filter(img, params);
  }
  save_image(result, dst, 8);
  std::cout << label << " f0 " << format_double(used) << '\n';
}

void cmd_augment(const GlobalArgs& g, const std::string& image_path,
                 const std::string& seq_path, const std::string& f0,
                 int order) {
  const double cutoff = parse_cutoff(f0);
  if (cutoff >= 0.0) HomomorphicParams{cutoff, order}.validate();
  if (image_path.empty() == seq_path.empty())
    throw InputError("pass exactly one of --image or --seq");

  if (!image_path.empty()) {
    const ImageBuffer img = load_image(image_path);
    const std::string dst =
        out_path(g, fs::path(image_path).filename().string());
    augment_one(img, dst, cutoff, g.seed, order,
                fs::path(image_path).stem().string());
    return;
  }

  const SequenceManifest manifest = load_manifest(seq_path);
  for (std::size_t i = 0; i < manifest.frames.size(); ++i) {
    const std::string& src = manifest.frames[i].image_path;
    const ImageBuffer img = load_image(src);
    const std::string dst = out_path(g, fs::path(src).filename().string());
    augment_one(img, dst, cutoff, g.seed + i, order,
                fs::path(src).stem().string());
  }
}

void cmd_metrics(const GlobalArgs& g, const std::string& seq_path,
                 const std::string& pred_dir, const std::string& mask_dir,
                 std::optional<double> max_depth) {
  const SequenceManifest manifest = load_manifest(seq_path);
  std::optional<std::string> masks;
  if (!mask_dir.empty()) masks = mask_dir;
  const MetricsBatch batch =
      run_metrics(manifest, pred_dir, masks, max_depth, g.jobs);

  const MetricReport& a = batch.aggregate;
  std::cout << "abs_rel " << format_double(a.abs_rel) << '\n'
            << "sq_rel " << format_double(a.sq_rel) << '\n'
            << "rmse " << format_double(a.rmse) << '\n'
            << "rmse_log " << format_double(a.rmse_log) << '\n'
            << "delta1 " << format_double(a.delta1) << '\n'
            << "delta2 " << format_double(a.delta2) << '\n'
            << "delta3 " << format_double(a.delta3) << '\n';
  if (a.bg_error) std::cout << "bg_error " << format_double(*a.bg_error) << '\n';
  write_metrics_csv(batch, out_path(g, "metrics.csv"));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Underwater self-supervised depth toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalArgs g;
  auto* seed_opt = app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--config", g.config_path, "Loss configuration JSON file");
  app.add_option("--jobs", g.jobs, "Worker threads")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", g.out_dir, "Output directory");

  std::string scene_path, seq_path, image_path, pred_dir, mask_dir;
  std::string f0 = "random";
  int frame_index = 0, max_gap = 6, order = 2;
  std::size_t samples = 2000;
  bool svg = false;
  std::vector<double> alphas{0.0, 0.05, 0.1, 0.15, 0.2, 0.3, 0.5, 0.75, 1.0};
  double max_depth_val = 0.0;
  bool max_depth_given = false;

  CLI::App* synth = app.add_subcommand("synth", "Render a synthetic sequence");
  synth->add_option("--scene", scene_path, "Scene configuration JSON")
      ->required();

  CLI::App* loss = app.add_subcommand("loss", "Loss of one frame vs neighbors");
  loss->add_option("--seq", seq_path, "Sequence manifest JSON")->required();
  loss->add_option("--frame", frame_index, "Target frame index")->required();

  CLI::App* gap = app.add_subcommand("frame-gap", "Loss vs temporal gap");
  gap->add_option("--seq", seq_path, "Sequence manifest JSON")->required();
  gap->add_option("--max-gap", max_gap, "Largest gap to evaluate");
  gap->add_flag("--svg", svg, "Also write a line chart");

  CLI::App* sweep = app.add_subcommand("alpha-sweep", "Loss vs L1/SSIM mix");
  sweep->add_option("--seq", seq_path, "Sequence manifest JSON")->required();
  sweep->add_option("--alphas", alphas, "Alpha values")->delimiter(',');
  sweep->add_flag("--svg", svg, "Also write a line chart");

  CLI::App* ulap = app.add_subcommand(
      "ulap-corr", "Correlation of the attenuation prior with depth");
  ulap->add_option("--seq", seq_path, "Sequence manifest JSON")->required();
  ulap->add_option("--samples", samples, "Scatter subsample size");

  CLI::App* aug =
      app.add_subcommand("augment", "Homomorphic lighting augmentation");
  aug->add_option("--image", image_path, "Single input image");
  aug->add_option("--seq", seq_path, "Manifest for batch mode");
  aug->add_option("--f0", f0, "Cutoff frequency, or 'random'");
  aug->add_option("--order", order, "Butterworth order");

  CLI::App* met = app.add_subcommand("metrics", "Depth error suite");
  met->add_option("--seq", seq_path, "Sequence manifest JSON")->required();
  met->add_option("--pred", pred_dir, "Directory of predicted depth files")
      ->required();
  met->add_option("--bg-masks", mask_dir, "Directory of background masks");
  met->add_option("--max-depth", max_depth_val, "Ground-truth depth cap")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
    g.seed_given = seed_opt->count() > 0;
    max_depth_given = met->count("--max-depth") > 0;

    if (synth->parsed()) cmd_synth(g, scene_path);
    if (loss->parsed()) cmd_loss(g, seq_path, frame_index);
    if (gap->parsed()) cmd_frame_gap(g, seq_path, max_gap, svg);
    if (sweep->parsed()) cmd_alpha_sweep(g, seq_path, alphas, svg);
    if (ulap->parsed()) cmd_ulap_corr(g, seq_path, samples);
    if (aug->parsed()) cmd_augment(g, image_path, seq_path, f0, order);
    if (met->parsed())
      cmd_metrics(g, seq_path, pred_dir, mask_dir,
                  max_depth_given ? std::optional<double>(max_depth_val)
                                  : std::nullopt);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const DegeneracyError& e) {
    std::cerr << "degenerate: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
