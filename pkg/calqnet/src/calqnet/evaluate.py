"""Evaluation: predictions CSV (consumable by the generator's correlate
command) plus rank correlation and residual spread."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch
from scipy import stats

from .data import PairDataset
from .model import SiameseRegressor


class DegenerateInput(ValueError):
    """Rank correlation undefined (constant predictions or labels)."""


@dataclass
class EvalReport:
    rows: list[tuple[int, float, float]]  # (id, true, predicted)
    rho: float
    p: float
    sigma: float


def predict(model: SiameseRegressor, dataset: PairDataset, batch: int = 64) -> np.ndarray:
    model.eval()
    preds = []
    with torch.no_grad():
        for start in range(0, len(dataset), batch):
            idx = np.arange(start, min(start + batch, len(dataset)))
            left, right, _ = dataset.tensors(idx)
            preds.append(model(left, right).numpy())
    return np.concatenate(preds) if preds else np.zeros(0, dtype=np.float32)


def evaluate(
    model: SiameseRegressor, dataset: PairDataset, predictions_csv: str | Path | None = None
) -> EvalReport:
    preds = predict(model, dataset)
    labels = dataset.labels
    ids = dataset.ids()
    if predictions_csv is not None:
        with open(predictions_csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["id", "pred"])
            for i, value in zip(ids, preds):
                writer.writerow([i, repr(float(value))])
    if np.all(preds == preds[0]) or np.all(labels == labels[0]):
        raise DegenerateInput("constant predictions or labels, rho undefined")
    rho, p = stats.spearmanr(preds, labels)
    residual = preds - labels
    return EvalReport(
        rows=[(i, float(t), float(y)) for i, t, y in zip(ids, labels, preds)],
        rho=float(rho),
        p=float(p),
        sigma=float(np.std(residual)),
    )
