"""CLI: train on a manifest, evaluate a trained model, emit predictions CSV."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .data import load_pairs
from .evaluate import evaluate
from .model import ModelSpec
from .train import TrainConfig, load_weights, save_weights, train


def _parse_size(text: str) -> tuple[int, int]:
    w, h = text.lower().split("x")
    return int(w), int(h)


def _cmd_train(args) -> int:
    spec = ModelSpec(input_size=_parse_size(args.input_size), dropout=args.dropout)
    cfg = TrainConfig(
        lr=args.lr,
        epochs=args.epochs,
        batch=args.batch,
        dropout=args.dropout,
        seed=args.seed,
        deterministic=args.deterministic,
    )
    dataset = load_pairs(args.manifest, "train", spec.input_size, seed=cfg.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    model, curve = train(spec, cfg, dataset, loss_curve_path=out / "loss_curve.csv")
    save_weights(model, out / "weights.pt")
    print(
        json.dumps(
            {
                "n_train": len(dataset),
                "first_epoch_loss": curve[0],
                "final_epoch_loss": curve[-1],
                "weights": str(out / "weights.pt"),
                "loss_curve": str(out / "loss_curve.csv"),
            }
        )
    )
    return 0


def _cmd_evaluate(args) -> int:
    model = load_weights(args.weights)
    dataset = load_pairs(args.manifest, args.split, model.spec.input_size, seed=args.seed)
    report = evaluate(model, dataset, predictions_csv=args.out)
    print(
        json.dumps(
            {
                "n": len(report.rows),
                "rho": report.rho,
                "p": report.p,
                "sigma": report.sigma,
                "predictions": str(args.out),
            }
        )
    )
    return 0


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    parser = argparse.ArgumentParser(prog="calqnet", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True, help="directory for weights + loss curve")
    p.add_argument("--epochs", type=int, default=60)
    p.add_argument("--batch", type=int, default=32)
    p.add_argument("--lr", type=float, default=1e-3)
    p.add_argument("--dropout", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--input-size", default="192x64")
    p.add_argument("--deterministic", action="store_true")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("evaluate")
    p.add_argument("--manifest", required=True)
    p.add_argument("--weights", required=True)
    p.add_argument("--out", required=True, help="predictions CSV path")
    p.add_argument("--split", default="test", choices=["train", "test", "all"])
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_evaluate)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
