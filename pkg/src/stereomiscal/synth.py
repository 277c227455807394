"""Synthetic scenes: disturbance sampling, ground-truth correspondences,
procedural stereo rendering.

All randomness flows through explicit integer seeds driving the Philox
(4x64) counter-based generator. Independent draw streams are separated by
a fixed domain tag in the second key word, so e.g. disturbance sampling
and scene layout never share values even for the same seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import project_point, transform_point, undistort_normalized
from .rectify import (
    Rectification,
    RectificationMap,
    StereoCalibration,
    _forward_or_mask,
    build_map,
    remap_bilinear,
)
from .validregion import CropRect, crop_resize, joint_crop

_TAG_DISTURBANCE = 1
_TAG_POINTS = 2
_TAG_SCENE = 3

_MASK64 = (1 << 64) - 1


def _rng(seed: int, tag: int) -> np.random.Generator:
    if seed < 0:
        raise ValueError("seed must be non-negative")
    return np.random.Generator(np.random.Philox(key=[seed & _MASK64, tag]))


@dataclass(frozen=True)
class SceneConfig:
    """Knobs for the procedural scene behind one stereo pair.

    ``lateral_extent`` is the half-width (meters) of the sampling box at
    the far end of ``depth_range``; nearer points are drawn from a
    proportionally narrower box so the frustum stays covered.
    ``quad_depths`` are the depths of the textured fronto-parallel quads;
    the deepest one is unbounded so every forward ray hits something.
    ``n_scenes > 0`` cycles the scene seed over a fixed pool of that size,
    giving repeated scenes with fresh disturbances.
    """

    n_points: int = 200
    depth_range: tuple[float, float] = (6.0, 40.0)
    lateral_extent: float = 8.0
    texture: str = "value-noise"
    texture_cell: float = 0.5
    texture_octaves: int = 3
    quad_depths: tuple[float, ...] = (8.0, 14.0, 25.0)
    n_scenes: int = 0

    def __post_init__(self):
        if self.n_points < 1:
            raise ValueError("n_points must be >= 1")
        lo, hi = self.depth_range
        if not 0 < lo < hi:
            raise ValueError("depth_range must satisfy 0 < min < max")
        if self.texture not in ("value-noise", "checker", "constant"):
            raise ValueError(f"unknown texture {self.texture!r}")
        if len(self.quad_depths) < 1 or min(self.quad_depths) <= 0:
            raise ValueError("quad_depths must be positive and non-empty")


@dataclass(frozen=True)
class Correspondence:
    """A ground-truth match: pixel in each (rectified) image plus the
    3D point that produced it. ``point`` is None for matches loaded from
    external files."""

    left: np.ndarray
    right: np.ndarray
    point: np.ndarray | None = None


def sample_disturbance(seed: int, d_thr: float) -> np.ndarray:
    """Six independent uniform draws in [-1.5 d_thr, +1.5 d_thr]."""
    if d_thr <= 0:
        raise ValueError("d_thr must be positive")
    rng = _rng(seed, _TAG_DISTURBANCE)
    return rng.uniform(-1.5 * d_thr, 1.5 * d_thr, size=6)


def generate_points(seed: int, cfg: SceneConfig) -> np.ndarray:
    """Uniform points in the frustum box, shape (n_points, 3)."""
    rng = _rng(seed, _TAG_POINTS)
    lo, hi = cfg.depth_range
    z = rng.uniform(lo, hi, size=cfg.n_points)
    half = cfg.lateral_extent * z / hi
    x = rng.uniform(-1.0, 1.0, size=cfg.n_points) * half
    y = rng.uniform(-1.0, 1.0, size=cfg.n_points) * half
    return np.stack([x, y, z], axis=-1)


def _in_bounds(pix: np.ndarray, x0: float, y0: float, x1: float, y1: float) -> np.ndarray:
    return (
        (pix[..., 0] >= x0) & (pix[..., 0] <= x1) & (pix[..., 1] >= y0) & (pix[..., 1] <= y1)
    )


def project_correspondences(
    points: np.ndarray,
    calib: StereoCalibration,
    rect_true: Rectification,
    rect_disturbed: Rectification,
    crop: CropRect | None = None,
) -> list[Correspondence]:
    """Ground-truth matches as seen through a disturbed rectification.

    Points are projected into the raw images with the true calibration
    (the physical rig), then carried into the rectified frame of
    ``rect_disturbed``. A match is kept when both raw pixels land inside
    the raw images and both rectified pixels land inside ``crop`` (the
    full rectified image when no crop is given). ``rect_true`` identifies
    the reference rectification the disturbance is measured against; it
    does not influence the returned pixels.
    """
    points = np.asarray(points, dtype=float).reshape(-1, 3)
    pts_r = transform_point(calib.extrinsics, points)
    ok = (points[:, 2] > 1e-9) & (pts_r[:, 2] > 1e-9)
    w, h = calib.left.image_size
    out: list[Correspondence] = []
    if not np.any(ok):
        return out
    idx = np.nonzero(ok)[0]
    raw_l = project_point(calib.left, points[idx])
    raw_r = project_point(calib.right, pts_r[idx])
    vis = _in_bounds(raw_l, 0, 0, w - 1, h - 1) & _in_bounds(raw_r, 0, 0, w - 1, h - 1)
    rec_l, ok_l = _forward_or_mask(calib, rect_disturbed, "left", raw_l)
    rec_r, ok_r = _forward_or_mask(calib, rect_disturbed, "right", raw_r)
    vis &= ok_l & ok_r
    if crop is None:
        bx0, by0 = 0.0, 0.0
        bx1, by1 = w - 1.0, h - 1.0
    else:
        bx0, by0 = float(crop.x), float(crop.y)
        bx1, by1 = crop.x + crop.w - 1.0, crop.y + crop.h - 1.0
    vis &= _in_bounds(rec_l, bx0, by0, bx1, by1) & _in_bounds(rec_r, bx0, by0, bx1, by1)
    for i in np.nonzero(vis)[0]:
        out.append(
            Correspondence(left=rec_l[i], right=rec_r[i], point=points[idx[i]])
        )
    return out


def forward_matches(
    calib: StereoCalibration, rect: Rectification, matches: list[Correspondence]
) -> list[Correspondence]:
    """Carry raw-coordinate matches into the rectified frame of ``rect``.

    Matches whose rays bend behind the rectified image plane are dropped;
    out-of-bounds pixels are kept (their row offset is still meaningful).
    """
    if not matches:
        return []
    raw_l = np.stack([m.left for m in matches])
    raw_r = np.stack([m.right for m in matches])
    rec_l, ok_l = _forward_or_mask(calib, rect, "left", raw_l)
    rec_r, ok_r = _forward_or_mask(calib, rect, "right", raw_r)
    return [
        Correspondence(left=rec_l[i], right=rec_r[i], point=matches[i].point)
        for i in np.nonzero(ok_l & ok_r)[0]
    ]


# --- procedural textures ------------------------------------------------


def _splitmix(z: np.ndarray) -> np.ndarray:
    z = (z + np.uint64(0x9E3779B97F4A7C15)) & np.uint64(_MASK64)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def _lattice01(ix: np.ndarray, iy: np.ndarray, salt: int) -> np.ndarray:
    """Deterministic pseudo-random value in [0, 1) per lattice point."""
    a = ix.astype(np.int64).astype(np.uint64) * np.uint64(0x9E3779B97F4A7C15)
    b = iy.astype(np.int64).astype(np.uint64) * np.uint64(0xC2B2AE3D27D4EB4F)
    s = np.uint64((salt * 0xD6E8FEB86659FD93) & _MASK64)
    h = _splitmix(a ^ b ^ s)
    return (h >> np.uint64(11)).astype(np.float64) / float(1 << 53)


def _value_noise(x: np.ndarray, y: np.ndarray, cell: float, octaves: int, salt: int) -> np.ndarray:
    total = np.zeros_like(x)
    norm = 0.0
    for k in range(octaves):
        scale = (2.0**k) / cell
        amp = 0.5**k
        px, py = x * scale, y * scale
        ix, iy = np.floor(px), np.floor(py)
        fx, fy = px - ix, py - iy
        fx = fx * fx * (3.0 - 2.0 * fx)
        fy = fy * fy * (3.0 - 2.0 * fy)
        h00 = _lattice01(ix, iy, salt + k)
        h10 = _lattice01(ix + 1, iy, salt + k)
        h01 = _lattice01(ix, iy + 1, salt + k)
        h11 = _lattice01(ix + 1, iy + 1, salt + k)
        total += amp * ((h00 * (1 - fx) + h10 * fx) * (1 - fy) + (h01 * (1 - fx) + h11 * fx) * fy)
        norm += amp
    return total / norm


def _checker(x: np.ndarray, y: np.ndarray, cell: float) -> np.ndarray:
    par = (np.floor(x / cell) + np.floor(y / cell)) % 2.0
    return np.where(par > 0.5, 0.85, 0.25)


def _texture(cfg: SceneConfig, x: np.ndarray, y: np.ndarray, salt: int) -> np.ndarray:
    if cfg.texture == "checker":
        return _checker(x, y, cfg.texture_cell)
    if cfg.texture == "constant":
        return np.full_like(np.asarray(x, dtype=float), 0.6)
    return _value_noise(x, y, cfg.texture_cell, cfg.texture_octaves, salt)


# --- quad scene ----------------------------------------------------------


def _scene_quads(seed: int, cfg: SceneConfig, calib: StereoCalibration):
    """Fronto-parallel quads (depth, center_x, center_y, half_extent, salt),
    sorted near to far; the farthest has infinite extent."""
    rng = _rng(seed, _TAG_SCENE)
    cam = calib.left
    depths = sorted(cfg.quad_depths)
    quads = []
    for i, depth in enumerate(depths):
        span = depth * cam.width / (2.0 * cam.fx)  # half-width of the view
        cx_q, cy_q = rng.uniform(-0.5 * span, 0.5 * span, size=2)
        half = 0.45 * span
        if i == len(depths) - 1:
            cx_q = cy_q = 0.0
            half = np.inf
        quads.append((float(depth), float(cx_q), float(cy_q), float(half), i))
    return quads


def _render_raw(seed: int, cfg: SceneConfig, calib: StereoCalibration, side: str) -> np.ndarray:
    """Inverse-map render of one raw view: pixel -> ray -> nearest quad."""
    cam = calib.camera(side)
    w, h = cam.image_size
    u, v = np.meshgrid(np.arange(w, dtype=float), np.arange(h, dtype=float))
    n = np.stack([(u - cam.cx) / cam.fx, (v - cam.cy) / cam.fy], axis=-1)
    n = undistort_normalized(cam, n)
    dirs = np.stack([n[..., 0], n[..., 1], np.ones_like(u)], axis=-1)
    if side == "left":
        origin = np.zeros(3)
    else:
        r = calib.extrinsics.matrix()
        dirs = dirs @ r  # row-vector form of R^T @ d
        origin = -r.T @ calib.extrinsics.translation

    img = np.zeros((h, w))
    unset = np.ones((h, w), dtype=bool)
    dz = dirs[..., 2]
    for depth, qx, qy, half, salt in _scene_quads(seed, cfg, calib):
        fwd = dz > 1e-12
        s = np.where(fwd, (depth - origin[2]) / np.where(fwd, dz, 1.0), -1.0)
        px = origin[0] + s * dirs[..., 0]
        py = origin[1] + s * dirs[..., 1]
        hit = unset & fwd & (s > 0)
        if np.isfinite(half):
            hit &= (np.abs(px - qx) <= half) & (np.abs(py - qy) <= half)
        img[hit] = _texture(cfg, px[hit], py[hit], seed * 1000 + salt * 16)
        unset &= ~hit
        if not unset.any():
            break
    return img


def render_pair(
    seed: int,
    cfg: SceneConfig,
    calib: StereoCalibration,
    rect: Rectification,
    crop: CropRect | tuple[CropRect, CropRect] | None = None,
    maps: tuple[RectificationMap, RectificationMap] | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Render a stereo pair and push it through rectify -> crop -> resize.

    The raw views are rendered with the physical calibration ``calib``;
    ``rect`` (possibly from a disturbed calibration) drives the remap.
    ``crop`` is one shared rectangle, a (left, right) pair for per-image
    cropping, or None to compute the joint crop here (may raise
    NoValidRect).
    """
    if maps is None:
        maps = (build_map(calib, rect, "left"), build_map(calib, rect, "right"))
    raw_l = _render_raw(seed, cfg, calib, "left")
    raw_r = _render_raw(seed, cfg, calib, "right")
    rec_l, mask_l = remap_bilinear(raw_l, maps[0])
    rec_r, mask_r = remap_bilinear(raw_r, maps[1])
    w, h = calib.left.image_size
    if crop is None:
        crop = joint_crop(mask_l, mask_r, w / h)
    crop_l, crop_r = crop if isinstance(crop, tuple) else (crop, crop)
    return crop_resize(rec_l, crop_l, (w, h)), crop_resize(rec_r, crop_r, (w, h))
