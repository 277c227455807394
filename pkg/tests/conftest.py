from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from stereomiscal import CameraIntrinsics, RigidTransform, StereoCalibration

settings.register_profile(
    "default", max_examples=60, suppress_health_check=[HealthCheck.too_slow], deadline=None
)
settings.load_profile("default")


def random_calibration(rng: np.random.Generator, distortion: bool = False) -> StereoCalibration:
    """A plausible random stereo rig: moderate rotation, non-vertical baseline."""
    w, h = int(rng.integers(320, 1280)), int(rng.integers(240, 720))
    cam = lambda: CameraIntrinsics(
        fx=float(rng.uniform(300, 900)),
        fy=float(rng.uniform(300, 900)),
        cx=float(rng.uniform(0.4, 0.6) * w),
        cy=float(rng.uniform(0.4, 0.6) * h),
        dist=(
            np.array([rng.uniform(-0.2, 0.2), rng.uniform(-0.05, 0.05), 0.001, -0.001, 0.0])
            if distortion
            else np.zeros(5)
        ),
        image_size=(w, h),
    )
    axis = rng.normal(size=3)
    axis /= np.linalg.norm(axis)
    rotation = axis * rng.uniform(0, 0.1)
    translation = np.array(
        [-rng.uniform(0.08, 0.6), rng.uniform(-0.02, 0.02), rng.uniform(-0.02, 0.02)]
    )
    return StereoCalibration(
        left=cam(), right=cam(), extrinsics=RigidTransform(rotation, translation)
    )


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)
