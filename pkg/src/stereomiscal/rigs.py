"""Embedded reference rigs used by tests, examples and benchmarks."""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from .geometry import CameraIntrinsics, RigidTransform
from .rectify import StereoCalibration

KITTI_D_THR = 0.05
EUROC_D_THR = 0.025


def kitti_like(image_size: tuple[int, int] = (1242, 375)) -> StereoCalibration:
    """Wide automotive rig: 0.537 m baseline along -x, identity rotation."""
    w, h = image_size
    cam = CameraIntrinsics(
        fx=718.0 * w / 1242.0,
        fy=718.0 * w / 1242.0,
        cx=w / 2.0,
        cy=h / 2.0,
        dist=np.zeros(5),
        image_size=(w, h),
    )
    return StereoCalibration(
        left=cam,
        right=cam,
        extrinsics=RigidTransform(rotation=np.zeros(3), translation=[-0.537, 0.0, 0.0]),
    )


def euroc_like(image_size: tuple[int, int] = (752, 480)) -> StereoCalibration:
    """Narrow MAV rig: 0.110 m baseline along -x, identity rotation."""
    w, h = image_size
    cam = CameraIntrinsics(
        fx=458.0 * w / 752.0,
        fy=458.0 * w / 752.0,
        cx=w / 2.0,
        cy=h / 2.0,
        dist=np.zeros(5),
        image_size=(w, h),
    )
    return StereoCalibration(
        left=cam,
        right=cam,
        extrinsics=RigidTransform(rotation=np.zeros(3), translation=[-0.110, 0.0, 0.0]),
    )


def with_distortion(calib: StereoCalibration, dist) -> StereoCalibration:
    """Copy of ``calib`` with the same distortion vector on both cameras."""
    dist = np.asarray(dist, dtype=float).reshape(5)
    return replace(
        calib,
        left=replace(calib.left, dist=dist),
        right=replace(calib.right, dist=dist),
    )
