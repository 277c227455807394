"""Rotation parameterizations, rigid transforms and the pinhole camera model.

Conventions used throughout the toolkit:

* rotation vectors are axis-angle 3-vectors in radians (magnitude = angle),
  canonical angle range [0, pi];
* rigid transforms map points from the left-camera frame into the
  right-camera frame, ``X_r = R @ X_l + t``, translation in meters;
* normalized image coordinates live on the z = 1 plane; pixels are
  (x, y) with the origin at the top-left pixel center.

All functions broadcast over leading axes: a ``(..., 3)`` array of points
is handled the same way as a single 3-vector.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BehindCamera, NoConvergence, NotARotation

_SMALL_ANGLE = 1e-8
_NEAR_PI_SIN = 1e-3


def skew(v: np.ndarray) -> np.ndarray:
    """Cross-product matrix of a 3-vector."""
    x, y, z = v
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def rotvec_to_matrix(r) -> np.ndarray:
    """Convert an axis-angle rotation vector to a 3x3 rotation matrix.

    Uses the Rodrigues formula; below ``1e-8`` radians the trigonometric
    coefficients are replaced by their second-order Taylor expansions to
    avoid 0/0.
    """
    r = np.asarray(r, dtype=float)
    theta = float(np.linalg.norm(r))
    k = skew(r)
    if theta < _SMALL_ANGLE:
        a = 1.0 - theta * theta / 6.0
        b = 0.5 - theta * theta / 24.0
    else:
        a = np.sin(theta) / theta
        b = (1.0 - np.cos(theta)) / (theta * theta)
    return np.eye(3) + a * k + b * (k @ k)


def nearest_rotation(m) -> np.ndarray:
    """Orthonormal projection of ``m`` onto SO(3) (special orthogonal)."""
    u, _, vt = np.linalg.svd(np.asarray(m, dtype=float))
    d = np.sign(np.linalg.det(u @ vt))
    return u @ np.diag([1.0, 1.0, d]) @ vt


def matrix_to_rotvec(m) -> np.ndarray:
    """Extract the canonical rotation vector (angle in [0, pi]) from ``m``.

    ``m`` is first projected onto the nearest rotation; if it deviates from
    that projection by more than 1e-6 per entry, NotARotation is raised.
    The angle comes from atan2 of the symmetric/antisymmetric decomposition,
    which stays accurate at both ends of the range; near pi the axis is
    recovered from the dominant diagonal of the outer-product part.
    """
    m = np.asarray(m, dtype=float)
    if m.shape != (3, 3):
        raise NotARotation(f"expected 3x3 matrix, got {m.shape}")
    r = nearest_rotation(m)
    if np.max(np.abs(m - r)) > 1e-6:
        raise NotARotation("matrix deviates from orthonormality by more than 1e-6")

    # antisymmetric part: v = 2 sin(theta) * axis
    v = np.array([r[2, 1] - r[1, 2], r[0, 2] - r[2, 0], r[1, 0] - r[0, 1]])
    s = 0.5 * float(np.linalg.norm(v))
    c = 0.5 * (float(np.trace(r)) - 1.0)
    theta = float(np.arctan2(s, c))

    if s < _SMALL_ANGLE and c > 0.0:
        return 0.5 * v
    if s < _NEAR_PI_SIN and c < 0.0:
        # near pi: axis axis^T = (sym(R) - c I) / (1 - c)
        outer = (0.5 * (r + r.T) - c * np.eye(3)) / (1.0 - c)
        i = int(np.argmax(np.diag(outer)))
        axis = np.empty(3)
        axis[i] = np.sqrt(max(outer[i, i], 0.0))
        for j in range(3):
            if j != i:
                axis[j] = outer[i, j] / axis[i]
        axis /= np.linalg.norm(axis)
        if np.linalg.norm(v) > 1e-12:
            if float(np.dot(axis, v)) < 0.0:
                axis = -axis
        elif axis[int(np.argmax(np.abs(axis)))] < 0.0:
            axis = -axis  # angle exactly pi: sign is free, fix it
        return theta * axis
    return (theta / (2.0 * s)) * v


@dataclass(frozen=True)
class RigidTransform:
    """6-DoF rigid transform: ``rotation`` is a rotation vector (radians),
    ``translation`` in meters. Applies as ``X_out = R @ X_in + t``."""

    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "rotation", np.asarray(self.rotation, dtype=float).reshape(3))
        object.__setattr__(self, "translation", np.asarray(self.translation, dtype=float).reshape(3))
        if not np.all(np.isfinite(self.rotation)) or not np.all(np.isfinite(self.translation)):
            raise ValueError("transform components must be finite")

    def matrix(self) -> np.ndarray:
        return rotvec_to_matrix(self.rotation)


def transform_point(t: RigidTransform, p) -> np.ndarray:
    """Apply ``t`` to one point or an array of points of shape (..., 3)."""
    p = np.asarray(p, dtype=float)
    return p @ t.matrix().T + t.translation


@dataclass(frozen=True)
class CameraIntrinsics:
    """Pinhole camera with radial-tangential distortion.

    ``dist`` holds (k1, k2, p1, p2, k3); ``image_size`` is (width, height)
    in pixels.
    """

    fx: float
    fy: float
    cx: float
    cy: float
    dist: np.ndarray = field(default_factory=lambda: np.zeros(5))
    image_size: tuple[int, int] = (640, 480)

    def __post_init__(self):
        object.__setattr__(self, "dist", np.asarray(self.dist, dtype=float).reshape(5))
        object.__setattr__(self, "image_size", (int(self.image_size[0]), int(self.image_size[1])))
        w, h = self.image_size
        if self.fx <= 0 or self.fy <= 0:
            raise ValueError("focal lengths must be positive")
        if not (0 <= self.cx < w and 0 <= self.cy < h):
            raise ValueError("principal point must lie inside the image")

    @property
    def width(self) -> int:
        return self.image_size[0]

    @property
    def height(self) -> int:
        return self.image_size[1]

    def has_distortion(self) -> bool:
        return bool(np.any(self.dist != 0.0))


def distort_normalized(cam: CameraIntrinsics, p) -> np.ndarray:
    """Forward radial-tangential distortion on normalized coordinates.

    radial factor 1 + k1 r^2 + k2 r^4 + k3 r^6; tangential terms
    (2 p1 x y + p2 (r^2 + 2 x^2), p1 (r^2 + 2 y^2) + 2 p2 x y).
    """
    p = np.asarray(p, dtype=float)
    k1, k2, p1, p2, k3 = cam.dist
    x, y = p[..., 0], p[..., 1]
    r2 = x * x + y * y
    radial = 1.0 + r2 * (k1 + r2 * (k2 + r2 * k3))
    xd = x * radial + 2.0 * p1 * x * y + p2 * (r2 + 2.0 * x * x)
    yd = y * radial + p1 * (r2 + 2.0 * y * y) + 2.0 * p2 * x * y
    return np.stack([xd, yd], axis=-1)


def undistort_normalized(cam: CameraIntrinsics, p, max_iter: int = 50) -> np.ndarray:
    """Invert :func:`distort_normalized` by fixed-point iteration.

    Starts at the distorted coordinates and iterates until the update is
    below 1e-12 or ``max_iter`` rounds have run. Raises NoConvergence when
    the final forward residual exceeds 1e-8.
    """
    p = np.asarray(p, dtype=float)
    k1, k2, p1, p2, k3 = cam.dist
    xd, yd = p[..., 0], p[..., 1]
    x, y = xd.copy(), yd.copy()
    for _ in range(max_iter):
        r2 = x * x + y * y
        radial = 1.0 + r2 * (k1 + r2 * (k2 + r2 * k3))
        dx = 2.0 * p1 * x * y + p2 * (r2 + 2.0 * x * x)
        dy = p1 * (r2 + 2.0 * y * y) + 2.0 * p2 * x * y
        x_new = (xd - dx) / radial
        y_new = (yd - dy) / radial
        step = max(np.max(np.abs(x_new - x), initial=0.0), np.max(np.abs(y_new - y), initial=0.0))
        x, y = x_new, y_new
        if step < 1e-12:
            break
    out = np.stack([x, y], axis=-1)
    residual = np.linalg.norm(distort_normalized(cam, out) - p, axis=-1)
    if np.any(residual > 1e-8):
        raise NoConvergence(f"undistortion residual {float(np.max(residual)):.3e} > 1e-8")
    return out


def project_point(cam: CameraIntrinsics, p) -> np.ndarray:
    """Project camera-frame points (..., 3) to pixel coordinates (..., 2)."""
    p = np.asarray(p, dtype=float)
    z = p[..., 2]
    if np.any(z <= 1e-9):
        raise BehindCamera("point depth must exceed 1e-9")
    n = p[..., :2] / z[..., None]
    d = distort_normalized(cam, n)
    return np.stack([cam.fx * d[..., 0] + cam.cx, cam.fy * d[..., 1] + cam.cy], axis=-1)
