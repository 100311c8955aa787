"""Self-supervised underwater depth toolkit.

NumPy-facing bindings over the C++ core. Images are float64 arrays in
[0, 1], shaped HxW or HxWx3; depth and scalar maps are HxW float64 with
NaN marking invalid pixels; poses are 4x4 rigid-transform matrices.
"""

from ._uwdepth import (
    CameraIntrinsics,
    DegeneracyError,
    InputError,
    LossConfig,
    WaterProperties,
    apply_medium,
    augment,
    backproject,
    background_region,
    bg_error,
    butterworth_highpass,
    correlation_loss,
    depth_metrics,
    disparity_from_depth,
    homomorphic_filter,
    identity_grid,
    l1_map,
    load_depth,
    load_image,
    local_variation,
    luma,
    lvw_weighted_loss,
    median_scale,
    min_composite,
    normalize_lvw,
    render_scene,
    render_scene_file,
    reproject,
    reprojection_loss_map,
    rgb_to_yuv,
    save_depth,
    save_image,
    ssim_dissimilarity_map,
    total_loss,
    transmission,
    ulap,
    warp,
    water_preset,
    yuv_to_rgb,
)

__all__ = [
    "CameraIntrinsics",
    "DegeneracyError",
    "InputError",
    "LossConfig",
    "WaterProperties",
    "apply_medium",
    "augment",
    "backproject",
    "background_region",
    "bg_error",
    "butterworth_highpass",
    "correlation_loss",
    "depth_metrics",
    "disparity_from_depth",
    "homomorphic_filter",
    "identity_grid",
    "l1_map",
    "load_depth",
    "load_image",
    "local_variation",
    "luma",
    "lvw_weighted_loss",
    "median_scale",
    "min_composite",
    "normalize_lvw",
    "render_scene",
    "render_scene_file",
    "reproject",
    "reprojection_loss_map",
    "rgb_to_yuv",
    "save_depth",
    "save_image",
    "ssim_dissimilarity_map",
    "total_loss",
    "transmission",
    "ulap",
    "warp",
    "water_preset",
    "yuv_to_rgb",
]
