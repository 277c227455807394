#!/usr/bin/env python3
"""Full regressor experiment: generate, train, evaluate, correlate.

Chains the two packages through their CLIs only, mirroring how the pieces
are meant to be deployed:

    python scripts/calqnet_experiment.py /tmp/calq_exp --samples 2000 --epochs 60
"""

from __future__ import annotations

import argparse
import json
import subprocess
import sys
from pathlib import Path

from stereomiscal.pipeline import calibration_to_json
from stereomiscal.rigs import kitti_like


def sh(*argv) -> str:
    proc = subprocess.run([str(a) for a in argv], capture_output=True, text=True)
    if proc.returncode != 0:
        sys.stderr.write(proc.stderr)
        raise SystemExit(proc.returncode)
    return proc.stdout


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("work_dir")
    parser.add_argument("--samples", type=int, default=2000)
    parser.add_argument("--epochs", type=int, default=60)
    parser.add_argument("--input-size", default="192x64")
    args = parser.parse_args()

    work = Path(args.work_dir)
    work.mkdir(parents=True, exist_ok=True)
    w, h = (int(v) for v in args.input_size.split("x"))

    config = {
        "calibration": calibration_to_json(kitti_like(image_size=(w, h))),
        "d_thr": 0.05,
        "n_samples": args.samples,
        "base_seed": 0,
        "scene": {
            "n_points": 50,
            "depth_range": [6.0, 40.0],
            "lateral_extent": 8.0,
            "texture": "checker",
            "texture_cell": 0.5,
            "texture_octaves": 3,
            "quad_depths": [8.0, 14.0, 25.0],
            "n_scenes": 1,
        },
        "output_dir": str(work / "data"),
        "crop_mode": "joint",
    }
    config_path = work / "config.json"
    config_path.write_text(json.dumps(config, indent=2))

    py = sys.executable
    manifest = work / "data" / "manifest.jsonl"
    print(sh(py, "-m", "stereomiscal.cli", "generate", "--config", config_path).strip())
    print(
        sh(
            py, "-m", "calqnet.cli", "train", "--manifest", manifest,
            "--out", work / "model", "--epochs", args.epochs, "--input-size", args.input_size,
        ).strip()
    )
    print(
        sh(
            py, "-m", "calqnet.cli", "evaluate", "--manifest", manifest,
            "--weights", work / "model" / "weights.pt",
            "--out", work / "preds.csv", "--split", "test",
        ).strip()
    )
    report = sh(
        py, "-m", "stereomiscal.cli", "correlate", "--manifest", manifest,
        "--pred", work / "preds.csv",
    )
    print(report.strip())
    return 0


if __name__ == "__main__":
    sys.exit(main())
