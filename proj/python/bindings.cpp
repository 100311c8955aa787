#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "uwdepth/errors.hpp"
#include "uwdepth/geometry.hpp"
#include "uwdepth/homomorphic.hpp"
#include "uwdepth/image.hpp"
#include "uwdepth/io.hpp"
#include "uwdepth/metrics.hpp"
#include "uwdepth/photoloss.hpp"
#include "uwdepth/simulator.hpp"
#include "uwdepth/watermodel.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

using DoubleArray =
    py::array_t<double, py::array::c_style | py::array::forcecast>;
using BoolArray = py::array_t<bool, py::array::c_style | py::array::forcecast>;

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Images cross the boundary as H x W or H x W x C float64 in [0, 1];
// depth and scalar maps as H x W float64 with NaN at invalid pixels.

uwd::ImageBuffer to_image(const DoubleArray& a) {
  const py::buffer_info info = a.request();
  int h = 0, w = 0, c = 1;
  if (info.ndim == 2) {
    h = static_cast<int>(info.shape[0]);
    w = static_cast<int>(info.shape[1]);
  } else if (info.ndim == 3 && (info.shape[2] == 1 || info.shape[2] == 3)) {
    h = static_cast<int>(info.shape[0]);
    w = static_cast<int>(info.shape[1]);
    c = static_cast<int>(info.shape[2]);
  } else {
    throw uwd::InputError("image array must be HxW or HxWxC with C in {1, 3}");
  }
  uwd::ImageBuffer img(h, w, c);
  const double* src = static_cast<const double*>(info.ptr);
  std::copy(src, src + img.data.size(), img.data.begin());
  return img;
}

py::array from_image(const uwd::ImageBuffer& img) {
  DoubleArray out = img.channels == 1
                        ? DoubleArray({img.height, img.width})
                        : DoubleArray({img.height, img.width, img.channels});
  std::copy(img.data.begin(), img.data.end(), out.mutable_data());
  return out;
}

uwd::DepthMap to_depth(const DoubleArray& a) {
  const py::buffer_info info = a.request();
  if (info.ndim != 2)
    throw uwd::InputError("depth array must be 2-dimensional");
  uwd::DepthMap d(static_cast<int>(info.shape[0]),
                  static_cast<int>(info.shape[1]));
  const double* src = static_cast<const double*>(info.ptr);
  for (int y = 0; y < d.height; ++y)
    for (int x = 0; x < d.width; ++x) d.set(y, x, src[d.index(y, x)]);
  return d;
}

py::array from_depth(const uwd::DepthMap& d) {
  DoubleArray out({d.height, d.width});
  double* dst = out.mutable_data();
  for (std::size_t i = 0; i < d.data.size(); ++i)
    dst[i] = d.validity[i] ? d.data[i] : kNan;
  return out;
}

uwd::ScalarMap to_scalar(const DoubleArray& a) {
  const py::buffer_info info = a.request();
  if (info.ndim != 2)
    throw uwd::InputError("scalar map array must be 2-dimensional");
  uwd::ScalarMap m(static_cast<int>(info.shape[0]),
                   static_cast<int>(info.shape[1]));
  const double* src = static_cast<const double*>(info.ptr);
  for (std::size_t i = 0; i < m.values.size(); ++i) {
    if (std::isfinite(src[i])) {
      m.values[i] = src[i];
    } else {
      m.values[i] = 0.0;
      m.valid[i] = 0;
    }
  }
  return m;
}

py::array from_scalar(const uwd::ScalarMap& m) {
  DoubleArray out({m.height, m.width});
  double* dst = out.mutable_data();
  for (std::size_t i = 0; i < m.values.size(); ++i)
    dst[i] = m.valid[i] ? m.values[i] : kNan;
  return out;
}

uwd::PixelMask to_mask(const BoolArray& a) {
  const py::buffer_info info = a.request();
  if (info.ndim != 2) throw uwd::InputError("mask array must be 2-dimensional");
  uwd::PixelMask m(static_cast<int>(info.shape[0]),
                   static_cast<int>(info.shape[1]));
  const bool* src = static_cast<const bool*>(info.ptr);
  for (std::size_t i = 0; i < m.data.size(); ++i) m.data[i] = src[i] ? 1 : 0;
  return m;
}

py::array from_mask(const uwd::PixelMask& m) {
  py::array_t<bool> out({m.height, m.width});
  bool* dst = out.mutable_data();
  for (std::size_t i = 0; i < m.data.size(); ++i) dst[i] = m.data[i] != 0;
  return out;
}

py::array plane_array(int h, int w, const std::vector<double>& v) {
  DoubleArray out({h, w});
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

uwd::PointGrid to_points(const DoubleArray& a) {
  const py::buffer_info info = a.request();
  if (info.ndim != 3 || info.shape[2] != 3)
    throw uwd::InputError("point array must be HxWx3");
  uwd::PointGrid g;
  g.height = static_cast<int>(info.shape[0]);
  g.width = static_cast<int>(info.shape[1]);
  g.points.assign(static_cast<std::size_t>(g.height) * g.width,
                  Eigen::Vector3d::Zero());
  g.valid.assign(g.points.size(), 0);
  const double* src = static_cast<const double*>(info.ptr);
  for (std::size_t i = 0; i < g.points.size(); ++i) {
    const Eigen::Vector3d p(src[3 * i], src[3 * i + 1], src[3 * i + 2]);
    if (p.allFinite()) {
      g.points[i] = p;
      g.valid[i] = 1;
    }
  }
  return g;
}

py::array from_points(const uwd::PointGrid& g) {
  DoubleArray out({g.height, g.width, 3});
  double* dst = out.mutable_data();
  for (std::size_t i = 0; i < g.points.size(); ++i)
    for (int k = 0; k < 3; ++k)
      dst[3 * i + k] = g.valid[i] ? g.points[i][k] : kNan;
  return out;
}

uwd::PixelGrid to_grid(const DoubleArray& x, const DoubleArray& y,
                       const BoolArray& in_bounds) {
  const py::buffer_info xi = x.request(), yi = y.request(),
                        bi = in_bounds.request();
  if (xi.ndim != 2 || yi.ndim != 2 || bi.ndim != 2 ||
      xi.shape != yi.shape || xi.shape != bi.shape)
    throw uwd::InputError("grid arrays must be 2-dimensional and same shape");
  uwd::PixelGrid g;
  g.height = static_cast<int>(xi.shape[0]);
  g.width = static_cast<int>(xi.shape[1]);
  const std::size_t n = static_cast<std::size_t>(g.height) * g.width;
  g.x.assign(static_cast<const double*>(xi.ptr),
             static_cast<const double*>(xi.ptr) + n);
  g.y.assign(static_cast<const double*>(yi.ptr),
             static_cast<const double*>(yi.ptr) + n);
  g.in_bounds.resize(n);
  const bool* bp = static_cast<const bool*>(bi.ptr);
  for (std::size_t i = 0; i < n; ++i) g.in_bounds[i] = bp[i] ? 1 : 0;
  return g;
}

py::tuple from_grid(const uwd::PixelGrid& g) {
  py::array_t<bool> inb({g.height, g.width});
  bool* bp = inb.mutable_data();
  for (std::size_t i = 0; i < g.in_bounds.size(); ++i)
    bp[i] = g.in_bounds[i] != 0;
  return py::make_tuple(plane_array(g.height, g.width, g.x),
                        plane_array(g.height, g.width, g.y), inb);
}

py::dict report_dict(const uwd::MetricReport& r) {
  py::dict d;
  d["abs_rel"] = r.abs_rel;
  d["sq_rel"] = r.sq_rel;
  d["rmse"] = r.rmse;
  d["rmse_log"] = r.rmse_log;
  d["delta1"] = r.delta1;
  d["delta2"] = r.delta2;
  d["delta3"] = r.delta3;
  d["bg_error"] = r.bg_error ? py::cast(*r.bg_error) : py::none();
  d["pixel_count"] = r.pixel_count;
  return d;
}

}  // namespace

PYBIND11_MODULE(_uwdepth, m) {
  m.doc() =
      "Self-supervised underwater depth toolkit: reprojection losses, "
      "attenuation priors, homomorphic augmentation, depth metrics, and a "
      "synthetic underwater renderer. Images are float64 arrays in [0, 1]; "
      "depth and scalar maps use NaN for invalid pixels; poses are 4x4 "
      "rigid-transform matrices.";

  py::register_exception<uwd::InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<uwd::DegeneracyError>(m, "DegeneracyError",
                                               PyExc_ArithmeticError);

  py::class_<uwd::CameraIntrinsics>(m, "CameraIntrinsics",
                                    "Pinhole parameters in pixels.")
      .def(py::init<double, double, double, double>(), "fx"_a, "fy"_a, "cx"_a,
           "cy"_a)
      .def_readwrite("fx", &uwd::CameraIntrinsics::fx)
      .def_readwrite("fy", &uwd::CameraIntrinsics::fy)
      .def_readwrite("cx", &uwd::CameraIntrinsics::cx)
      .def_readwrite("cy", &uwd::CameraIntrinsics::cy);

  py::class_<uwd::LossConfig>(m, "LossConfig",
                              "Weights and switches of the total loss.")
      .def(py::init([](double alpha, int lvw_window, double corr_weight,
                       bool use_min_composite, bool use_lvw) {
             uwd::LossConfig cfg;
             cfg.alpha = alpha;
             cfg.lvw_window = lvw_window;
             cfg.corr_weight = corr_weight;
             cfg.use_min_composite = use_min_composite;
             cfg.use_lvw = use_lvw;
             cfg.validate();
             return cfg;
           }),
           "alpha"_a = 0.1, "lvw_window"_a = 25, "corr_weight"_a = 1e-5,
           "use_min_composite"_a = true, "use_lvw"_a = true)
      .def_readwrite("alpha", &uwd::LossConfig::alpha)
      .def_readwrite("lvw_window", &uwd::LossConfig::lvw_window)
      .def_readwrite("corr_weight", &uwd::LossConfig::corr_weight)
      .def_readwrite("use_min_composite", &uwd::LossConfig::use_min_composite)
      .def_readwrite("use_lvw", &uwd::LossConfig::use_lvw)
      .def("validate", &uwd::LossConfig::validate);

  py::class_<uwd::WaterProperties>(
      m, "WaterProperties",
      "Per-channel attenuation chi (1/m) and ambient light, order R,G,B.")
      .def(py::init([](std::array<double, 3> chi,
                       std::array<double, 3> ambient) {
             uwd::WaterProperties w;
             w.chi = chi;
             w.ambient = ambient;
             w.validate();
             return w;
           }),
           "chi"_a = std::array<double, 3>{0.40, 0.10, 0.07},
           "ambient"_a = std::array<double, 3>{0.15, 0.35, 0.45})
      .def_readwrite("chi", &uwd::WaterProperties::chi)
      .def_readwrite("ambient", &uwd::WaterProperties::ambient)
      .def("validate", &uwd::WaterProperties::validate);

  // ---- image I/O and color ----

  m.def(
      "load_image",
      [](const std::string& path) { return from_image(uwd::load_image(path)); },
      "path"_a, "Load an 8- or 16-bit PNG as float64 scaled to [0, 1].");
  m.def(
      "save_image",
      [](const DoubleArray& img, const std::string& path, int bit_depth) {
        uwd::save_image(to_image(img), path, bit_depth);
      },
      "img"_a, "path"_a, "bit_depth"_a = 8,
      "Save an image as PNG; values are clamped to [0, 1] first.");
  m.def(
      "load_depth",
      [](const std::string& path) { return from_depth(uwd::load_depth(path)); },
      "path"_a, "Load a single-channel PFM; invalid pixels come back NaN.");
  m.def(
      "save_depth",
      [](const DoubleArray& depth, const std::string& path) {
        uwd::save_depth(to_depth(depth), path);
      },
      "depth"_a, "path"_a,
      "Save a depth map as PFM; NaN and non-positive pixels are stored "
      "invalid.");
  m.def(
      "rgb_to_yuv",
      [](const DoubleArray& img) {
        const uwd::YuvImage yuv = uwd::rgb_to_yuv(to_image(img));
        return py::make_tuple(plane_array(yuv.height, yuv.width, yuv.y),
                              plane_array(yuv.height, yuv.width, yuv.u),
                              plane_array(yuv.height, yuv.width, yuv.v));
      },
      "img"_a, "BT.601 full-range conversion; returns (y, u, v) planes.");
  m.def(
      "yuv_to_rgb",
      [](const DoubleArray& y, const DoubleArray& u, const DoubleArray& v) {
        const py::buffer_info yi = y.request(), ui = u.request(),
                              vi = v.request();
        if (yi.ndim != 2 || yi.shape != ui.shape || yi.shape != vi.shape)
          throw uwd::InputError("y, u, v planes must be 2-D and same shape");
        uwd::YuvImage yuv(static_cast<int>(yi.shape[0]),
                          static_cast<int>(yi.shape[1]));
        const std::size_t n = yuv.y.size();
        std::copy_n(static_cast<const double*>(yi.ptr), n, yuv.y.begin());
        std::copy_n(static_cast<const double*>(ui.ptr), n, yuv.u.begin());
        std::copy_n(static_cast<const double*>(vi.ptr), n, yuv.v.begin());
        return from_image(uwd::yuv_to_rgb(yuv));
      },
      "y"_a, "u"_a, "v"_a, "Inverse of rgb_to_yuv.");
  m.def(
      "luma",
      [](const DoubleArray& img) {
        return from_scalar(uwd::luma_map(to_image(img)));
      },
      "img"_a, "BT.601 luma plane; identity copy for single-channel input.");

  // ---- reprojection geometry ----

  m.def(
      "backproject",
      [](const DoubleArray& depth, const uwd::CameraIntrinsics& K) {
        return from_points(uwd::backproject(to_depth(depth), K));
      },
      "depth"_a, "intrinsics"_a,
      "Lift each pixel to a camera-frame 3D point; invalid pixels give NaN "
      "rows. Pixel centers sit at integer coordinates.");
  m.def(
      "reproject",
      [](const DoubleArray& points, const Eigen::Matrix4d& pose,
         const uwd::CameraIntrinsics& K) {
        return from_grid(
            uwd::reproject(to_points(points), uwd::pose_from_matrix(pose), K));
      },
      "points"_a, "pose"_a, "intrinsics"_a,
      "Transform an HxWx3 point grid and project it; returns (x, y, "
      "in_bounds) with coordinates snapped to the lattice within 1e-9.");
  m.def(
      "identity_grid",
      [](int height, int width) {
        return from_grid(uwd::identity_grid(height, width));
      },
      "height"_a, "width"_a, "Grid mapping every pixel to itself.");
  m.def(
      "warp",
      [](const DoubleArray& source, const DoubleArray& x, const DoubleArray& y,
         const BoolArray& in_bounds) {
        const auto [img, mask] = uwd::warp(to_image(source),
                                           to_grid(x, y, in_bounds));
        return py::make_tuple(from_image(img), from_mask(mask));
      },
      "source"_a, "x"_a, "y"_a, "in_bounds"_a,
      "Bilinear sampling of source at the grid; returns (warped, mask). "
      "Out-of-bounds entries produce 0 with mask False.");

  // ---- photometric losses, weighting, attenuation prior ----

  m.def(
      "l1_map",
      [](const DoubleArray& a, const DoubleArray& b) {
        return from_scalar(uwd::l1_map(to_image(a), to_image(b)));
      },
      "a"_a, "b"_a, "Per-pixel mean over channels of |a - b|.");
  m.def(
      "ssim_dissimilarity_map",
      [](const DoubleArray& a, const DoubleArray& b) {
        return from_scalar(
            uwd::ssim_dissimilarity_map(to_image(a), to_image(b)));
      },
      "a"_a, "b"_a,
      "(1 - SSIM) / 2 with 3x3 uniform local statistics, in [0, 1].");
  m.def(
      "reprojection_loss_map",
      [](const DoubleArray& target, const DoubleArray& warped,
         const uwd::LossConfig& cfg, const std::optional<BoolArray>& coverage) {
        if (coverage) {
          const uwd::PixelMask mask = to_mask(*coverage);
          return from_scalar(uwd::reprojection_loss_map(
              to_image(target), to_image(warped), cfg, &mask));
        }
        return from_scalar(
            uwd::reprojection_loss_map(to_image(target), to_image(warped), cfg));
      },
      "target"_a, "warped"_a, "config"_a = uwd::LossConfig{},
      "coverage"_a = py::none(),
      "alpha * L1 + (1 - alpha) * SSIM dissimilarity; pixels outside the "
      "coverage mask are NaN.");
  m.def(
      "min_composite",
      [](const std::vector<DoubleArray>& maps) {
        std::vector<uwd::ScalarMap> ms;
        ms.reserve(maps.size());
        for (const DoubleArray& a : maps) ms.push_back(to_scalar(a));
        return from_scalar(uwd::min_composite(ms));
      },
      "maps"_a, "Per-pixel minimum over the valid entries of the maps.");
  m.def(
      "local_variation",
      [](const DoubleArray& img, int window) {
        return from_scalar(uwd::local_variation(to_image(img), window));
      },
      "img"_a, "window"_a,
      "Local luma variance over a window x window box, edge replicated.");
  m.def(
      "normalize_lvw",
      [](const DoubleArray& sigma) {
        return from_scalar(uwd::normalize_lvw(to_scalar(sigma)));
      },
      "sigma"_a,
      "Global min/max normalization to [0, 1]; a constant map yields zeros.");
  m.def(
      "lvw_weighted_loss",
      [](const DoubleArray& loss, const DoubleArray& weights) {
        return from_scalar(
            uwd::lvw_weighted_loss(to_scalar(loss), to_scalar(weights)));
      },
      "loss"_a, "weights"_a, "Elementwise product; weights must lie in [0, 1].");
  m.def(
      "ulap",
      [](const DoubleArray& img) {
        return from_scalar(uwd::ulap(to_image(img)));
      },
      "img"_a, "Attenuation prior max(B, G) - R per pixel, in [-1, 1].");
  m.def(
      "correlation_loss",
      [](const DoubleArray& depth, const DoubleArray& prior) {
        return uwd::correlation_loss(to_depth(depth), to_scalar(prior));
      },
      "depth"_a, "prior"_a,
      "1 - Pearson(depth, prior) over jointly valid pixels, in [0, 2]. "
      "Raises DegeneracyError when either side is constant.");
  m.def(
      "total_loss",
      [](const DoubleArray& target, const std::vector<DoubleArray>& sources,
         const DoubleArray& depth, const std::vector<Eigen::Matrix4d>& poses,
         const uwd::CameraIntrinsics& K, const uwd::LossConfig& cfg) {
        std::vector<uwd::ImageBuffer> srcs;
        srcs.reserve(sources.size());
        for (const DoubleArray& s : sources) srcs.push_back(to_image(s));
        std::vector<uwd::RigidPose> rel;
        rel.reserve(poses.size());
        for (const Eigen::Matrix4d& p : poses)
          rel.push_back(uwd::pose_from_matrix(p));
        const uwd::TotalLoss r =
            uwd::total_loss(to_image(target), srcs, to_depth(depth), rel, K,
                            cfg);
        py::dict d;
        d["value"] = r.value;
        d["photometric"] = r.photometric;
        d["correlation"] = r.correlation;
        d["map"] = from_scalar(r.map);
        d["lvw_mask"] = r.lvw_mask.values.empty()
                            ? py::object(py::none())
                            : py::object(from_scalar(r.lvw_mask));
        return d;
      },
      "target"_a, "sources"_a, "depth"_a, "target_to_source"_a, "intrinsics"_a,
      "config"_a = uwd::LossConfig{},
      "Full loss for one target frame against warped sources; returns a dict "
      "with the scalar terms, the composite loss map, and the LVW mask.");

  // ---- water medium ----

  m.def("water_preset", &uwd::water_preset, "name"_a,
        "Named water properties: 'default', 'clear', or 'turbid'.");
  m.def(
      "transmission",
      [](const DoubleArray& depth, double chi) {
        return from_scalar(uwd::transmission(to_depth(depth), chi));
      },
      "depth"_a, "chi"_a,
      "t = exp(-chi * d) for one channel; every pixel must be valid.");
  m.def(
      "apply_medium",
      [](const DoubleArray& clear, const DoubleArray& depth,
         const uwd::WaterProperties& water) {
        return from_image(
            uwd::apply_medium(to_image(clear), to_depth(depth), water));
      },
      "clear"_a, "depth"_a, "water"_a,
      "I = J t + A (1 - t) per channel; invalid depth gives pure ambient.");

  // ---- homomorphic augmentation ----

  m.def(
      "butterworth_highpass",
      [](int height, int width, double cutoff, int order) {
        return from_scalar(
            uwd::butterworth_highpass(height, width, cutoff, order));
      },
      "height"_a, "width"_a, "cutoff"_a, "order"_a = 2,
      "DC-centered Butterworth high-pass weights; H equals 0.5 at the "
      "cutoff radius and cutoff 0 yields all ones.");
  m.def(
      "homomorphic_filter",
      [](const DoubleArray& img, double cutoff, int order) {
        uwd::HomomorphicParams p;
        p.cutoff = cutoff;
        p.order = order;
        return from_image(uwd::homomorphic_filter(to_image(img), p));
      },
      "img"_a, "cutoff"_a, "order"_a = 2,
      "Filter the luma plane through the log-FFT chain; chroma is untouched.");
  m.def(
      "augment",
      [](const DoubleArray& img, std::uint64_t seed, int order) {
        const uwd::AugmentResult r = uwd::augment(to_image(img), seed, order);
        return py::make_tuple(from_image(r.image), r.cutoff);
      },
      "img"_a, "seed"_a, "order"_a = 2,
      "Homomorphic filtering with cutoff ~ U[0, 250] drawn from the seed; "
      "returns (image, cutoff).");

  // ---- evaluation metrics ----

  m.def(
      "median_scale",
      [](const DoubleArray& pred, const DoubleArray& gt) {
        const auto [scaled, ratio] =
            uwd::median_scale(to_depth(pred), to_depth(gt));
        return py::make_tuple(from_depth(scaled), ratio);
      },
      "pred"_a, "gt"_a,
      "Multiply pred by median(gt) / median(pred) over jointly valid pixels; "
      "returns (scaled, ratio).");
  m.def(
      "depth_metrics",
      [](const DoubleArray& pred, const DoubleArray& gt,
         std::optional<double> max_depth) {
        return report_dict(
            uwd::depth_metrics(to_depth(pred), to_depth(gt), max_depth));
      },
      "pred"_a, "gt"_a, "max_depth"_a = py::none(),
      "Median-scaled error suite (AbsRel, SqRel, RMSE, RMSElog, deltas) over "
      "jointly valid pixels.");
  m.def(
      "bg_error",
      [](const std::vector<DoubleArray>& disparities,
         const std::vector<BoolArray>& masks) {
        std::vector<uwd::DepthMap> ds;
        ds.reserve(disparities.size());
        for (const DoubleArray& d : disparities) ds.push_back(to_depth(d));
        std::vector<uwd::PixelMask> ms;
        ms.reserve(masks.size());
        for (const BoolArray& b : masks) ms.push_back(to_mask(b));
        return uwd::bg_error(ds, ms);
      },
      "disparities"_a, "masks"_a,
      "Mean predicted disparity over each background region, then the mean "
      "across images; NaN disparity counts as 0.");
  m.def(
      "disparity_from_depth",
      [](const DoubleArray& depth) {
        return from_depth(uwd::disparity_from_depth(to_depth(depth)));
      },
      "depth"_a, "1/depth with invalid pixels kept NaN.");

  // ---- synthetic scene renderer ----

  auto frames_list = [](const std::vector<uwd::RenderedFrame>& frames) {
    py::list out;
    for (const uwd::RenderedFrame& f : frames) {
      py::dict d;
      d["image"] = from_image(f.image);
      d["clear_image"] = from_image(f.clear_image);
      d["depth"] = from_depth(f.depth);
      d["pose"] = f.pose.matrix();
      out.append(d);
    }
    return out;
  };
  m.def(
      "render_scene",
      [frames_list](const std::string& json_text) {
        return frames_list(
            uwd::render_sequence(uwd::scene_from_json_text(json_text)));
      },
      "json_text"_a,
      "Render a scene described as JSON text; returns one dict per frame "
      "with image, clear_image, depth, and camera-to-world pose.");
  m.def(
      "render_scene_file",
      [frames_list](const std::string& path) {
        return frames_list(uwd::render_sequence(uwd::load_scene(path)));
      },
      "path"_a, "Render a scene described by a JSON file.");
  m.def(
      "background_region",
      [](const DoubleArray& depth, double horizon) {
        return from_mask(uwd::background_region(to_depth(depth), horizon));
      },
      "depth"_a, "horizon"_a = std::numeric_limits<double>::infinity(),
      "True where no geometry exists or the range exceeds the horizon.");
}
