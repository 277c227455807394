"""Weighted overall disturbance effect (WODE).

A disturbance d is a 6-vector added to the extrinsic parameters, ordered
(x, y, z) in meters then (rx, ry, rz) in radians. Its effect on the
rectification is scored per degree of freedom by how far the disturbed
rectifying rotations have turned away from the true ones:

    w_i(d_i) = |rotvec(Rd_left^T @ R*_left)| + |rotvec(Rd_right^T @ R*_right)|

where Rd/R* are the rectifying rotations of the disturbed / true
calibration. The overall effect and its normalized form are

    delta      = sum_i |w_i(d_i) * d_i|
    delta_thr  = sum_i |w_i(d_thr) * d_thr|
    delta_norm = delta / delta_thr

so a rig disturbed by d_thr in every degree of freedom scores exactly 1.
Weights depend only on the rectifying rotations, never on intrinsics.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ZeroThreshold
from .geometry import RigidTransform, matrix_to_rotvec
from .rectify import Rectification, StereoCalibration, stereo_rectify

N_DOF = 6
DOF_NAMES = ("x", "y", "z", "rx", "ry", "rz")


@dataclass(frozen=True)
class WodeResult:
    """Per-DoF weights plus the raw, threshold and normalized scores."""

    weights: np.ndarray
    delta: float
    delta_thr: float
    delta_norm: float


def as_disturbance(d) -> np.ndarray:
    d = np.asarray(d, dtype=float).reshape(N_DOF)
    if not np.all(np.isfinite(d)):
        raise ValueError("disturbance must be finite")
    return d


def disturb_calibration(calib: StereoCalibration, d) -> StereoCalibration:
    """Add d component-wise to the extrinsic parameter vector."""
    d = as_disturbance(d)
    ext = RigidTransform(
        rotation=calib.extrinsics.rotation + d[3:6],
        translation=calib.extrinsics.translation + d[0:3],
    )
    return replace(calib, extrinsics=ext)


def _rotation_gap(rect_d: Rectification, rect_true: Rectification) -> float:
    gap_l = np.linalg.norm(matrix_to_rotvec(rect_d.r_left.T @ rect_true.r_left))
    gap_r = np.linalg.norm(matrix_to_rotvec(rect_d.r_right.T @ rect_true.r_right))
    return float(gap_l + gap_r)


def wode_weight(
    calib: StereoCalibration, dof: int, d_i: float, rect_true: Rectification | None = None
) -> float:
    """Weight of one degree of freedom at disturbance value ``d_i``.

    Rectification depends only on the calibration, so one evaluation per
    calibration suffices. ``rect_true`` may be passed to reuse the true
    rectification across calls.
    """
    if not 0 <= dof < N_DOF:
        raise ValueError(f"dof must be in 0..5, got {dof}")
    if rect_true is None:
        rect_true = stereo_rectify(calib)
    d = np.zeros(N_DOF)
    d[dof] = d_i
    rect_d = stereo_rectify(disturb_calibration(calib, d))
    return _rotation_gap(rect_d, rect_true)


def wode_weights(calib: StereoCalibration, d) -> np.ndarray:
    """All six weights, each evaluated at its component of ``d``."""
    d = as_disturbance(d)
    rect_true = stereo_rectify(calib)
    return np.array(
        [wode_weight(calib, i, d[i], rect_true=rect_true) for i in range(N_DOF)]
    )


def wode(calib: StereoCalibration, d) -> float:
    """Overall disturbance effect delta = sum_i |w_i(d_i) * d_i|."""
    d = as_disturbance(d)
    return float(np.sum(np.abs(wode_weights(calib, d) * d)))


def wode_normalized(calib: StereoCalibration, d, d_thr: float) -> WodeResult:
    """Full result with delta normalized by the all-DoF threshold score.

    The normalization weights are evaluated at +d_thr on every degree of
    freedom (signed asymmetry of the weights is possible and accepted).
    """
    if d_thr <= 0:
        raise ValueError("d_thr must be positive")
    d = as_disturbance(d)
    weights = wode_weights(calib, d)
    delta = float(np.sum(np.abs(weights * d)))
    thr_vec = np.full(N_DOF, d_thr)
    delta_thr = float(np.sum(np.abs(wode_weights(calib, thr_vec) * thr_vec)))
    if delta_thr < 1e-15:
        raise ZeroThreshold("threshold score is numerically zero")
    return WodeResult(
        weights=weights, delta=delta, delta_thr=delta_thr, delta_norm=delta / delta_thr
    )
