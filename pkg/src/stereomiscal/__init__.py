"""Stereo-camera miscalibration synthesis and metrology toolkit."""

from .errors import (
    BehindCamera,
    BehindPlane,
    ConfigError,
    DegenerateBaseline,
    DegenerateInput,
    EmptyMatches,
    LengthMismatch,
    MissingIds,
    NoConvergence,
    NotARotation,
    NoValidRect,
    SizeMismatch,
    StereoMiscalError,
    ZeroThreshold,
)
from .geometry import (
    CameraIntrinsics,
    RigidTransform,
    distort_normalized,
    matrix_to_rotvec,
    project_point,
    rotvec_to_matrix,
    transform_point,
    undistort_normalized,
)
from .metrics import epipolar_error, spearman
from .rectify import (
    Rectification,
    RectificationMap,
    StereoCalibration,
    build_map,
    map_point_forward,
    remap_bilinear,
    stereo_rectify,
)
from .synth import (
    Correspondence,
    SceneConfig,
    generate_points,
    project_correspondences,
    render_pair,
    sample_disturbance,
)
from .validregion import CropRect, crop_resize, joint_crop, largest_aspect_rect
from .wode import (
    WodeResult,
    disturb_calibration,
    wode,
    wode_normalized,
    wode_weight,
    wode_weights,
)

__version__ = "0.1.0"
