"""Epipolar error and Spearman rank correlation with a permutation p-value."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .errors import DegenerateInput, EmptyMatches, LengthMismatch
from .synth import Correspondence

_PERM_SEED = 0x5EA8  # fixed stream for the permutation test


def epipolar_error(matches: list[Correspondence]) -> float:
    """RMS distance of matches to their epipolar lines, in pixels.

    In rectified geometry the epipolar line of a left point is the
    horizontal line through it, so the distance reduces to the row offset.
    """
    if len(matches) == 0:
        raise EmptyMatches("need at least one correspondence")
    dy = np.array([m.left[1] - m.right[1] for m in matches])
    return float(np.sqrt(np.mean(dy * dy)))


def average_ranks(x: np.ndarray) -> np.ndarray:
    """Ranks starting at 1, ties replaced by the mean rank of the group."""
    x = np.asarray(x, dtype=float)
    order = np.argsort(x, kind="stable")
    xs = x[order]
    ranks = np.empty(len(x))
    i = 0
    while i < len(xs):
        j = i
        while j + 1 < len(xs) and xs[j + 1] == xs[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def _rank_correlation(rx: np.ndarray, ry: np.ndarray) -> float:
    cx = rx - rx.mean()
    cy = ry - ry.mean()
    return float(np.dot(cx, cy) / np.sqrt(np.dot(cx, cx) * np.dot(cy, cy)))


def spearman(x, y, n_permutations: int = 10_000) -> tuple[float, float]:
    """Spearman rho with a two-sided permutation p-value.

    p = (1 + #{|rho_perm| >= |rho|}) / (n_permutations + 1), permutations
    drawn from a fixed internal seed so results are reproducible.
    Raises LengthMismatch for unpaired input and DegenerateInput when
    either vector is constant (rho undefined) or shorter than 3.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or y.ndim != 1 or len(x) != len(y):
        raise LengthMismatch(f"paired vectors required, got {x.shape} and {y.shape}")
    if len(x) < 3:
        raise DegenerateInput("need at least 3 samples")
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise DegenerateInput("constant input, rank correlation undefined")
    rx = average_ranks(x)
    ry = average_ranks(y)
    rho = _rank_correlation(rx, ry)
    # permuting y then ranking equals permuting the ranks of y, so the
    # permutation test runs on the rank vectors directly
    cx = rx - rx.mean()
    cy = ry - ry.mean()
    scale = np.sqrt(np.dot(cx, cx) * np.dot(cy, cy))
    rng = np.random.Generator(np.random.Philox(key=[_PERM_SEED, 0]))
    hits = 0
    chunk = max(1, min(n_permutations, 10_000_000 // max(len(x), 1)))
    done = 0
    while done < n_permutations:
        m = min(chunk, n_permutations - done)
        perms = rng.permuted(np.tile(cy, (m, 1)), axis=1)
        rho_perm = perms @ cx / scale
        hits += int(np.count_nonzero(np.abs(rho_perm) >= abs(rho) - 1e-12))
        done += m
    return rho, (1 + hits) / (n_permutations + 1)


def load_matches_csv(path: str | Path) -> list[Correspondence]:
    """Read matches from a CSV with header columns xl, yl, xr, yr."""
    out: list[Correspondence] = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"xl", "yl", "xr", "yr"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValueError(f"matches CSV must have columns {sorted(required)}")
        for row in reader:
            out.append(
                Correspondence(
                    left=np.array([float(row["xl"]), float(row["yl"])]),
                    right=np.array([float(row["xr"]), float(row["yr"])]),
                    point=None,
                )
            )
    return out
