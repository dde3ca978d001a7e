"""Gyroscope-driven blur fields, rolling-shutter blur synthesis and
non-blind spatially-variant deblurring."""

from .blurfield import (
    BlurField,
    PlaneParams,
    camera_orientations,
    canonicalize,
    compute_blur_field,
    field_to_color,
    homography_full,
    homography_rotational,
    map_point,
    read_blf,
    row_exposure,
    write_blf,
)
from .deconv import adjoint_apply, richardson_lucy_sv
from .images import load_image, save_image
from .imu_io import (
    FrameMeta,
    GyroSample,
    GyroTrack,
    Intrinsics,
    load_frame_meta,
    load_gyro_csv,
    load_intrinsics,
    parse_frame_meta,
    parse_gyro_csv,
    parse_intrinsics,
    sample_omega,
)
from .metrics import psnr, ssim
from .rotation import (
    integrate_rotation,
    integrate_to_times,
    quat_from_axis_angle,
    quat_mul,
    quat_to_matrix,
)
from .synth import (
    DatasetSample,
    GenParams,
    PerturbParams,
    add_gaussian_noise,
    apply_blur_field,
    generate_dataset,
    generate_sample,
    make_shake_track,
    make_texture,
    perturb_track,
)

__version__ = "0.1.0"

__all__ = [
    "BlurField",
    "DatasetSample",
    "FrameMeta",
    "GenParams",
    "GyroSample",
    "GyroTrack",
    "Intrinsics",
    "PerturbParams",
    "PlaneParams",
    "add_gaussian_noise",
    "adjoint_apply",
    "apply_blur_field",
    "camera_orientations",
    "canonicalize",
    "compute_blur_field",
    "field_to_color",
    "generate_dataset",
    "generate_sample",
    "homography_full",
    "homography_rotational",
    "integrate_rotation",
    "integrate_to_times",
    "load_frame_meta",
    "load_gyro_csv",
    "load_image",
    "load_intrinsics",
    "make_shake_track",
    "make_texture",
    "map_point",
    "parse_frame_meta",
    "parse_gyro_csv",
    "parse_intrinsics",
    "perturb_track",
    "psnr",
    "quat_from_axis_angle",
    "quat_mul",
    "quat_to_matrix",
    "read_blf",
    "richardson_lucy_sv",
    "row_exposure",
    "sample_omega",
    "save_image",
    "ssim",
    "write_blf",
]
