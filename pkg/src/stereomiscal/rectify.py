"""Stereo rectification: rotations, shared intrinsics, per-pixel maps, remapping.

The rectification splits the relative rotation evenly between the two
cameras (half-angle split), then aligns the new common x-axis with the
rotated baseline. The resulting virtual cameras are coplanar and
row-aligned: a scene point projects to the same row in both outputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import BehindPlane, DegenerateBaseline, SizeMismatch
from .geometry import (
    CameraIntrinsics,
    RigidTransform,
    distort_normalized,
    matrix_to_rotvec,
    rotvec_to_matrix,
    undistort_normalized,
)

Side = Literal["left", "right"]


@dataclass(frozen=True)
class StereoCalibration:
    """Two calibrated pinhole cameras plus the left-to-right extrinsics."""

    left: CameraIntrinsics
    right: CameraIntrinsics
    extrinsics: RigidTransform

    def __post_init__(self):
        if np.linalg.norm(self.extrinsics.translation) <= 1e-6:
            raise ValueError("baseline must be longer than 1e-6 m")
        if self.left.image_size != self.right.image_size:
            raise ValueError("left and right image sizes must match")

    def camera(self, side: Side) -> CameraIntrinsics:
        return self.left if side == "left" else self.right


@dataclass(frozen=True)
class Rectification:
    """Per-side rectifying rotations plus the shared pinhole ``k_new``.

    ``r_left``/``r_right`` rotate camera-frame rays into the rectified
    frame; ``k_new`` carries no distortion. ``baseline`` in meters.
    """

    r_left: np.ndarray
    r_right: np.ndarray
    k_new: CameraIntrinsics
    baseline: float

    def rotation(self, side: Side) -> np.ndarray:
        return self.r_left if side == "left" else self.r_right


@dataclass(frozen=True)
class RectificationMap:
    """Source pixel coordinates for every destination pixel.

    ``x_src``/``y_src`` have the output resolution; entries may fall
    outside the raw image (marked invalid downstream). ``raw_size`` is the
    (width, height) of the raw image the map samples from.
    """

    x_src: np.ndarray
    y_src: np.ndarray
    raw_size: tuple[int, int]

    @property
    def shape(self) -> tuple[int, int]:
        return self.x_src.shape

    def validity_mask(self) -> np.ndarray:
        """True where the source coordinate lands inside the raw image."""
        w, h = self.raw_size
        return (
            (self.x_src >= 0.0)
            & (self.x_src <= w - 1.0)
            & (self.y_src >= 0.0)
            & (self.y_src <= h - 1.0)
        )


def stereo_rectify(calib: StereoCalibration) -> Rectification:
    """Compute rectifying rotations and shared intrinsics for a stereo rig.

    Steps:

    1. half-angle split of the relative rotation: ``a0`` rotates the left
       camera by half the relative rotation, ``b0`` the right camera by the
       opposite half, so ``b0 @ R @ a0.T == I``;
    2. the rotated baseline ``t2 = b0 @ t`` defines the new basis rows:
       ``e1 = t2/|t2|`` (no sign flip), ``e2 = normalize((-t2_y, t2_x, 0))``,
       ``e3 = e1 x e2``;
    3. new intrinsics: focal = mean of the two vertical focals, principal
       point at the image center, zero distortion.

    Raises DegenerateBaseline when the baseline is (numerically) vertical,
    which leaves ``e2`` undefined.
    """
    r = matrix_to_rotvec(calib.extrinsics.matrix())
    a0 = rotvec_to_matrix(0.5 * r)
    b0 = rotvec_to_matrix(-0.5 * r)
    t2 = b0 @ calib.extrinsics.translation

    if t2[0] * t2[0] + t2[1] * t2[1] < 1e-12:
        raise DegenerateBaseline("baseline has no x-y component")
    e1 = t2 / np.linalg.norm(t2)
    e2 = np.array([-t2[1], t2[0], 0.0])
    e2 /= np.linalg.norm(e2)
    e3 = np.cross(e1, e2)
    r_rect = np.stack([e1, e2, e3])

    w, h = calib.left.image_size
    focal = 0.5 * (calib.left.fy + calib.right.fy)
    k_new = CameraIntrinsics(
        fx=focal, fy=focal, cx=w / 2.0, cy=h / 2.0, dist=np.zeros(5), image_size=(w, h)
    )
    return Rectification(
        r_left=r_rect @ a0,
        r_right=r_rect @ b0,
        k_new=k_new,
        baseline=float(np.linalg.norm(calib.extrinsics.translation)),
    )


def build_map(calib: StereoCalibration, rect: Rectification, side: Side) -> RectificationMap:
    """Per-destination-pixel source coordinates for one side.

    Each destination pixel is back-projected through ``k_new``, rotated into
    the raw camera frame, distorted, and projected through the raw
    intrinsics. Destination rays that bend behind the raw image plane get
    the sentinel (-1, -1).
    """
    cam = calib.camera(side)
    k = rect.k_new
    w, h = k.image_size
    u, v = np.meshgrid(np.arange(w, dtype=float), np.arange(h, dtype=float))
    rays = np.stack([(u - k.cx) / k.fx, (v - k.cy) / k.fy, np.ones_like(u)], axis=-1)
    back = rays @ rect.rotation(side)  # row-vector form of R^T @ n per pixel
    z = back[..., 2]
    ok = z > 1e-9
    zsafe = np.where(ok, z, 1.0)
    n = back[..., :2] / zsafe[..., None]
    d = distort_normalized(cam, n)
    x_src = np.where(ok, cam.fx * d[..., 0] + cam.cx, -1.0)
    y_src = np.where(ok, cam.fy * d[..., 1] + cam.cy, -1.0)
    return RectificationMap(x_src=x_src, y_src=y_src, raw_size=cam.image_size)


def _forward_or_mask(
    calib: StereoCalibration, rect: Rectification, side: Side, raw
) -> tuple[np.ndarray, np.ndarray]:
    """Forward-map raw pixels; returns (pixels, ok) with ok False where the
    rotated ray bends behind the rectified image plane."""
    cam = calib.camera(side)
    raw = np.asarray(raw, dtype=float)
    n = np.stack([(raw[..., 0] - cam.cx) / cam.fx, (raw[..., 1] - cam.cy) / cam.fy], axis=-1)
    n = undistort_normalized(cam, n)
    rays = np.stack([n[..., 0], n[..., 1], np.ones_like(n[..., 0])], axis=-1)
    out = rays @ rect.rotation(side).T
    z = out[..., 2]
    ok = z > 1e-9
    zsafe = np.where(ok, z, 1.0)
    k = rect.k_new
    pix = np.stack(
        [k.fx * out[..., 0] / zsafe + k.cx, k.fy * out[..., 1] / zsafe + k.cy], axis=-1
    )
    return pix, ok


def map_point_forward(
    calib: StereoCalibration, rect: Rectification, side: Side, raw
) -> np.ndarray:
    """Map raw pixel coordinates (..., 2) into the rectified image.

    Inverse of the per-pixel map: undistort, rotate into the rectified
    frame, reproject through ``k_new``. Raises BehindPlane if any rotated
    ray has z <= 1e-9.
    """
    pix, ok = _forward_or_mask(calib, rect, side, raw)
    if not np.all(ok):
        raise BehindPlane("rectified ray has non-positive depth")
    return pix


def remap_bilinear(img: np.ndarray, rmap: RectificationMap) -> tuple[np.ndarray, np.ndarray]:
    """Resample ``img`` through ``rmap`` with bilinear interpolation.

    A destination pixel is valid iff its source lies inside
    [0, W-1] x [0, H-1]; invalid pixels are set to 0. Returns the remapped
    image and the validity mask.
    """
    img = np.asarray(img, dtype=float)
    w, h = rmap.raw_size
    if img.shape != (h, w):
        raise SizeMismatch(f"image shape {img.shape} != raw size {(h, w)}")
    mask = rmap.validity_mask()
    x = np.clip(rmap.x_src, 0.0, w - 1.0)
    y = np.clip(rmap.y_src, 0.0, h - 1.0)
    x0 = np.floor(x).astype(int)
    y0 = np.floor(y).astype(int)
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    fx = x - x0
    fy = y - y0
    top = img[y0, x0] * (1.0 - fx) + img[y0, x1] * fx
    bot = img[y1, x0] * (1.0 - fx) + img[y1, x1] * fx
    out = top * (1.0 - fy) + bot * fy
    out[~mask] = 0.0
    return out, mask
