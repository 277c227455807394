"""Siamese regressor: one shared convolutional backbone, order-sensitive head."""

from __future__ import annotations

from dataclasses import dataclass

import torch
from torch import nn

BACKBONE_CHANNELS = (16, 32, 64, 128, 256)


@dataclass(frozen=True)
class ModelSpec:
    """Input geometry and regularization; the layer layout itself is fixed:
    five 3x3 stride-2 conv blocks (16/32/64/128/256, ReLU) with global
    average pooling per branch, then concat -> 512 -> 128 -> 1 with dropout
    on the dense layers."""

    input_size: tuple[int, int] = (192, 64)  # (width, height)
    dropout: float = 0.5


class SiameseRegressor(nn.Module):
    def __init__(self, spec: ModelSpec):
        super().__init__()
        self.spec = spec
        blocks = []
        in_ch = 1
        for out_ch in BACKBONE_CHANNELS:
            blocks += [nn.Conv2d(in_ch, out_ch, kernel_size=3, stride=2, padding=1), nn.ReLU()]
            in_ch = out_ch
        self.backbone = nn.Sequential(*blocks)
        feat = BACKBONE_CHANNELS[-1]
        self.head = nn.Sequential(
            nn.Dropout(spec.dropout),
            nn.Linear(2 * feat, 128),
            nn.ReLU(),
            nn.Dropout(spec.dropout),
            nn.Linear(128, 1),
        )
        self.apply(_init_xavier)

    def embed(self, x: torch.Tensor) -> torch.Tensor:
        w, h = self.spec.input_size
        if x.ndim != 4 or x.shape[1] != 1 or x.shape[2] != h or x.shape[3] != w:
            raise ValueError(f"expected (B, 1, {h}, {w}) input, got {tuple(x.shape)}")
        return self.backbone(x).mean(dim=(2, 3))

    def forward(self, left: torch.Tensor, right: torch.Tensor) -> torch.Tensor:
        features = torch.cat([self.embed(left), self.embed(right)], dim=1)
        out = self.head(features).squeeze(-1)
        if not torch.jit.is_tracing() and out.ndim != 1:
            raise ValueError(f"expected scalar per pair, got shape {tuple(out.shape)}")
        return out


def _init_xavier(module: nn.Module) -> None:
    if isinstance(module, (nn.Conv2d, nn.Linear)):
        nn.init.xavier_uniform_(module.weight)
        if module.bias is not None:
            nn.init.zeros_(module.bias)
