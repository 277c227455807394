"""Dataset loading from the generator's manifest + PNG layout.

The manifest is JSON-lines; each ok-status row names a left/right PNG pair
(grayscale, raw image size) and carries the normalized miscalibration
score used as the regression label. Images are resized to the network
input size and scaled to [0, 1].
"""

from __future__ import annotations

import json
import logging
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PairRecord:
    id: int
    left_path: Path
    right_path: Path
    label: float


class PairDataset:
    """In-memory pair dataset: images cached as uint8, scaled on batch."""

    def __init__(self, records: list[PairRecord], input_size: tuple[int, int]):
        self.input_size = input_size
        self.records: list[PairRecord] = []
        self.n_skipped = 0
        lefts, rights = [], []
        for rec in records:
            try:
                lefts.append(_load_gray(rec.left_path, input_size))
                rights.append(_load_gray(rec.right_path, input_size))
            except (OSError, SyntaxError) as exc:
                self.n_skipped += 1
                warnings.warn(f"skipping sample {rec.id}: {exc}", stacklevel=2)
                continue
            self.records.append(rec)
        w, h = input_size
        shape = (len(self.records), 1, h, w)
        self.left = np.stack(lefts).reshape(shape) if self.records else np.zeros(shape, np.uint8)
        self.right = np.stack(rights).reshape(shape) if self.records else np.zeros(shape, np.uint8)
        self.labels = np.array([r.label for r in self.records], dtype=np.float32)

    def __len__(self) -> int:
        return len(self.records)

    def ids(self) -> list[int]:
        return [r.id for r in self.records]

    def tensors(self, indices: np.ndarray):
        import torch

        left = torch.from_numpy(self.left[indices]).float() / 255.0
        right = torch.from_numpy(self.right[indices]).float() / 255.0
        labels = torch.from_numpy(self.labels[indices])
        return left, right, labels


def _load_gray(path: Path, size: tuple[int, int]) -> np.ndarray:
    with Image.open(path) as im:
        return np.asarray(im.convert("L").resize(size, Image.BILINEAR), dtype=np.uint8)


def read_ok_records(manifest_path: str | Path) -> list[dict]:
    rows = []
    with open(manifest_path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            row = json.loads(line)
            if row.get("status") == "ok":
                rows.append(row)
    return rows


def split_ids(rows: list[dict], seed: int, train_fraction: float) -> dict[int, str]:
    """Deterministic id -> split assignment; manifest annotations win."""
    if all(row.get("split") for row in rows):
        return {row["id"]: row["split"] for row in rows}
    ids = np.array(sorted(row["id"] for row in rows))
    rng = np.random.default_rng(seed)
    rng.shuffle(ids)
    n_train = int(round(train_fraction * len(ids)))
    return {int(i): ("train" if k < n_train else "test") for k, i in enumerate(ids)}


def load_pairs(
    manifest_path: str | Path,
    split: str,
    input_size: tuple[int, int] = (192, 64),
    seed: int = 0,
    train_fraction: float = 0.8,
) -> PairDataset:
    """Load one split ("train", "test" or "all") as a PairDataset."""
    if split not in ("train", "test", "all"):
        raise ValueError(f"split must be train/test/all, got {split!r}")
    rows = read_ok_records(manifest_path)
    assignment = split_ids(rows, seed, train_fraction)
    base = Path(manifest_path).parent
    records = [
        PairRecord(
            id=row["id"],
            left_path=base / row["left_path"],
            right_path=base / row["right_path"],
            label=float(row["wode_normalized"]),
        )
        for row in rows
        if split == "all" or assignment[row["id"]] == split
    ]
    dataset = PairDataset(records, input_size)
    log.info("loaded %d pairs for split %s (%d skipped)", len(dataset), split, dataset.n_skipped)
    return dataset
