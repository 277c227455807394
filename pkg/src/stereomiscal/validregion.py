"""Valid-region handling: largest aspect-preserving rectangle, crop + resize."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoValidRect

MIN_CROP_WIDTH = 32


@dataclass(frozen=True)
class CropRect:
    """Axis-aligned crop window, top-left corner (x, y), size (w, h)."""

    x: int
    y: int
    w: int
    h: int


def rect_width(aspect: float, height: int) -> int:
    """Width of an aspect-preserving rectangle of the given height
    (round half up, fixed so independent implementations agree)."""
    return int(math.floor(aspect * height + 0.5))


def largest_aspect_rect(mask: np.ndarray, aspect: float, min_width: int = MIN_CROP_WIDTH) -> CropRect:
    """Largest all-valid rectangle with width = rect_width(aspect, height).

    Binary search over the height (feasibility is monotone because the
    rounded width is monotone in the height); each probe tests every
    placement with a summed-area table of invalid counts. Ties are broken
    by smallest y, then smallest x. Raises NoValidRect when nothing with
    width >= ``min_width`` fits.
    """
    if aspect <= 0:
        raise ValueError("aspect must be positive")
    mask = np.asarray(mask, dtype=bool)
    hh, ww = mask.shape
    # summed-area table of invalid pixels, padded with a zero row/column
    sat = np.zeros((hh + 1, ww + 1), dtype=np.int64)
    np.cumsum(np.cumsum(~mask, axis=0), axis=1, out=sat[1:, 1:])

    def placement(h: int) -> tuple[int, int] | None:
        w = rect_width(aspect, h)
        if w < min_width or w > ww or h > hh:
            return None
        invalid = (
            sat[h:, w:]
            - sat[:-h or None, w:]
            - sat[h:, : -w or None]
            + sat[: hh - h + 1, : ww - w + 1]
        )
        ys, xs = np.nonzero(invalid == 0)
        if ys.size == 0:
            return None
        return int(ys[0]), int(xs[0])  # row-major scan: smallest y, then x

    h_lo = max(1, int(math.ceil((min_width - 0.5) / aspect)))
    h_hi = hh
    while rect_width(aspect, h_lo) < min_width:
        h_lo += 1
    if h_lo > h_hi or placement(h_lo) is None:
        raise NoValidRect("no all-valid rectangle of acceptable width")
    # largest feasible height in [h_lo, h_hi]
    lo, hi = h_lo, h_hi
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if placement(mid) is not None:
            lo = mid
        else:
            hi = mid - 1
    y, x = placement(lo)
    return CropRect(x=x, y=y, w=rect_width(aspect, lo), h=lo)


def joint_crop(mask_l: np.ndarray, mask_r: np.ndarray, aspect: float) -> CropRect:
    """Shared crop for a stereo pair: the largest rectangle valid in both
    masks, so identical crop + resize preserves row correspondence."""
    mask_l = np.asarray(mask_l, dtype=bool)
    mask_r = np.asarray(mask_r, dtype=bool)
    if mask_l.shape != mask_r.shape:
        raise ValueError("masks must have equal shapes")
    return largest_aspect_rect(mask_l & mask_r, aspect)


def crop_resize(img: np.ndarray, rect: CropRect, out_size: tuple[int, int]) -> np.ndarray:
    """Bilinear resize of the crop window to ``out_size`` (width, height).

    Half-pixel-centered source coordinates,
    ``x = rect.x + (u + 0.5) * w / W_out - 0.5``, clamped to the window.
    """
    img = np.asarray(img, dtype=float)
    w_out, h_out = int(out_size[0]), int(out_size[1])
    u = np.arange(w_out, dtype=float)
    v = np.arange(h_out, dtype=float)
    x = rect.x + (u + 0.5) * rect.w / w_out - 0.5
    y = rect.y + (v + 0.5) * rect.h / h_out - 0.5
    x = np.clip(x, rect.x, rect.x + rect.w - 1.0)
    y = np.clip(y, rect.y, rect.y + rect.h - 1.0)
    x0 = np.floor(x).astype(int)
    y0 = np.floor(y).astype(int)
    x1 = np.minimum(x0 + 1, rect.x + rect.w - 1)
    y1 = np.minimum(y0 + 1, rect.y + rect.h - 1)
    fx = x - x0
    fy = y - y0
    top = img[np.ix_(y0, x0)] * (1 - fx) + img[np.ix_(y0, x1)] * fx
    bot = img[np.ix_(y1, x0)] * (1 - fx) + img[np.ix_(y1, x1)] * fx
    return top * (1 - fy[:, None]) + bot * fy[:, None]
