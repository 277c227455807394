"""Training loop: Adam with a halving schedule, MSE on the normalized score."""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch

from .data import PairDataset
from .model import ModelSpec, SiameseRegressor

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainConfig:
    lr: float = 1e-3
    epochs: int = 60
    batch: int = 32
    dropout: float = 0.5
    seed: int = 0
    halve_every: int = 20
    deterministic: bool = False

    def __post_init__(self):
        if self.lr <= 0:
            raise ValueError("lr must be positive")


def train(
    spec: ModelSpec,
    cfg: TrainConfig,
    dataset: PairDataset,
    loss_curve_path: str | Path | None = None,
) -> tuple[SiameseRegressor, list[float]]:
    """Train a fresh Xavier-initialized model; returns it with the per-epoch
    mean loss curve. Aborts with diagnostics if the loss leaves the reals."""
    if len(dataset) < 2 * cfg.batch:
        raise ValueError(f"need at least 2 batches of data, got {len(dataset)} samples")
    if cfg.deterministic:
        torch.use_deterministic_algorithms(True)
    torch.manual_seed(cfg.seed)

    model = SiameseRegressor(ModelSpec(input_size=spec.input_size, dropout=cfg.dropout))
    optimizer = torch.optim.Adam(model.parameters(), lr=cfg.lr)
    scheduler = torch.optim.lr_scheduler.StepLR(optimizer, step_size=cfg.halve_every, gamma=0.5)
    loss_fn = torch.nn.MSELoss()

    curve: list[float] = []
    for epoch in range(cfg.epochs):
        order = np.random.default_rng((cfg.seed, epoch)).permutation(len(dataset))
        model.train()
        losses = []
        for start in range(0, len(order) - cfg.batch + 1, cfg.batch):
            idx = order[start : start + cfg.batch]
            left, right, labels = dataset.tensors(idx)
            optimizer.zero_grad()
            pred = model(left, right)
            loss = loss_fn(pred, labels)
            if not torch.isfinite(loss):
                raise RuntimeError(
                    f"non-finite loss at epoch {epoch}, batch {start // cfg.batch}: "
                    f"loss={loss.item()}, lr={scheduler.get_last_lr()[0]:.2e}"
                )
            loss.backward()
            optimizer.step()
            losses.append(loss.item())
        scheduler.step()
        curve.append(float(np.mean(losses)))
        log.info("epoch %d/%d: loss=%.5f lr=%.2e", epoch + 1, cfg.epochs, curve[-1], scheduler.get_last_lr()[0])

    if loss_curve_path is not None:
        with open(loss_curve_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["epoch", "loss"])
            for i, value in enumerate(curve):
                writer.writerow([i, repr(value)])
    return model, curve


def overfit_single_batch(
    spec: ModelSpec, dataset: PairDataset, steps: int = 200, batch: int = 8, seed: int = 0
) -> float:
    """Sanity oracle: drive one batch to near-zero training MSE."""
    torch.manual_seed(seed)
    model = SiameseRegressor(ModelSpec(input_size=spec.input_size, dropout=0.0))
    optimizer = torch.optim.Adam(model.parameters(), lr=1e-3)
    loss_fn = torch.nn.MSELoss()
    idx = np.arange(min(batch, len(dataset)))
    left, right, labels = dataset.tensors(idx)
    model.train()
    loss = None
    for _ in range(steps):
        optimizer.zero_grad()
        loss = loss_fn(model(left, right), labels)
        loss.backward()
        optimizer.step()
    return loss.item()


def save_weights(model: SiameseRegressor, path: str | Path) -> None:
    torch.save({"spec": model.spec, "state": model.state_dict()}, path)


def load_weights(path: str | Path) -> SiameseRegressor:
    payload = torch.load(path, weights_only=False)
    model = SiameseRegressor(payload["spec"])
    model.load_state_dict(payload["state"])
    model.eval()
    return model
