"""Command-line interface.

Subcommands: generate, wode, sweep, rectify, eval-epi, correlate.
Exit codes: 0 success, 1 validation error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import pipeline
from .errors import SizeMismatch, StereoMiscalError
from .metrics import epipolar_error, load_matches_csv
from .rectify import build_map, remap_bilinear, stereo_rectify
from .synth import forward_matches
from .validregion import crop_resize, joint_crop
from .wode import disturb_calibration, wode_normalized


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with 2; spec wants 1
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_disturbance(text: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != 6:
        raise ValueError("disturbance must be 6 comma-separated numbers x,y,z,a,b,g")
    return np.array([float(p) for p in parts])


def _cmd_generate(args) -> int:
    with open(args.config) as fh:
        raw_cfg = json.load(fh)
    problems = pipeline.validate_config_dict(raw_cfg)
    if problems:
        for p in problems:
            print(f"config error: {p}", file=sys.stderr)
        return 1
    cfg = pipeline.load_config(
        args.config, output_dir=args.out, base_seed=args.seed, n_samples=args.samples
    )
    records = pipeline.generate_dataset(cfg, split_fraction=args.split)
    n_ok = sum(1 for r in records if r.status == "ok")
    print(
        json.dumps(
            {
                "n_samples": len(records),
                "n_ok": n_ok,
                "n_rejected": len(records) - n_ok,
                "manifest": str(Path(cfg.output_dir) / "manifest.jsonl"),
            }
        )
    )
    return 0


def _cmd_wode(args) -> int:
    cfg = pipeline.load_config(args.config)
    d_thr = args.d_thr if args.d_thr is not None else cfg.d_thr
    d = _parse_disturbance(args.disturbance)
    result = wode_normalized(cfg.calibration, d, d_thr)
    print(
        json.dumps(
            {
                "delta": result.delta,
                "delta_thr": result.delta_thr,
                "delta_norm": result.delta_norm,
                "weights": [float(w) for w in result.weights],
            }
        )
    )
    return 0


def _cmd_sweep(args) -> int:
    cfg = pipeline.load_config(args.config)
    rows = pipeline.sweep(cfg, pipeline.dof_index(args.dof), args.max, args.steps)
    pipeline.write_sweep_csv(rows, args.out)
    print(json.dumps({"rows": len(rows), "out": args.out}))
    return 0


def _cmd_rectify(args) -> int:
    cfg = pipeline.load_config(args.config)
    calib = cfg.calibration
    d = _parse_disturbance(args.disturbance)
    img_l = pipeline.read_image(args.left)
    img_r = pipeline.read_image(args.right)
    w, h = calib.left.image_size
    if img_l.shape != (h, w) or img_r.shape != (h, w):
        raise SizeMismatch(
            f"input images must be {w}x{h}, got {img_l.shape[::-1]} and {img_r.shape[::-1]}"
        )
    rect = stereo_rectify(disturb_calibration(calib, d))
    maps = (build_map(calib, rect, "left"), build_map(calib, rect, "right"))
    rec_l, mask_l = remap_bilinear(img_l, maps[0])
    rec_r, mask_r = remap_bilinear(img_r, maps[1])
    crop = joint_crop(mask_l, mask_r, w / h)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    pipeline.write_image(out_dir / "left_rect.png", crop_resize(rec_l, crop, (w, h)))
    pipeline.write_image(out_dir / "right_rect.png", crop_resize(rec_r, crop, (w, h)))
    result = wode_normalized(calib, d, cfg.d_thr)
    print(
        json.dumps(
            {
                "crop": {"x": crop.x, "y": crop.y, "w": crop.w, "h": crop.h},
                "delta": result.delta,
                "delta_norm": result.delta_norm,
                "out": str(out_dir),
            }
        )
    )
    return 0


def _cmd_eval_epi(args) -> int:
    cfg = pipeline.load_config(args.config)
    calib = cfg.calibration
    d = _parse_disturbance(args.disturbance)
    matches = load_matches_csv(args.matches)
    rect = stereo_rectify(disturb_calibration(calib, d))
    kept = forward_matches(calib, rect, matches)
    if not kept:
        print(json.dumps({"n": 0, "e_epi": None, "n_dropped": len(matches)}))
        return 0
    print(
        json.dumps(
            {
                "n": len(kept),
                "e_epi": epipolar_error(kept),
                "n_dropped": len(matches) - len(kept),
            }
        )
    )
    return 0


def _cmd_correlate(args) -> int:
    print(json.dumps(pipeline.correlate(args.manifest, args.pred)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stereomiscal", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a semi-synthetic dataset")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None, help="override output directory")
    p.add_argument("--seed", type=int, default=None, help="override base seed")
    p.add_argument("--samples", type=int, default=None, help="override sample count")
    p.add_argument("--split", type=float, default=None, help="train fraction to annotate")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("wode", help="score one disturbance")
    p.add_argument("--config", required=True)
    p.add_argument("--disturbance", required=True, help="x,y,z,a,b,g")
    p.add_argument("--d-thr", type=float, default=None, dest="d_thr")
    p.set_defaults(func=_cmd_wode)

    p = sub.add_parser("sweep", help="sweep one degree of freedom")
    p.add_argument("--config", required=True)
    p.add_argument("--dof", required=True, choices=["x", "y", "z", "rx", "ry", "rz"])
    p.add_argument("--max", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("rectify", help="apply the disturbed pipeline to user images")
    p.add_argument("--config", required=True)
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--disturbance", required=True, help="x,y,z,a,b,g")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_rectify)

    p = sub.add_parser("eval-epi", help="epipolar error of raw matches under a disturbance")
    p.add_argument("--config", required=True)
    p.add_argument("--matches", required=True, help="CSV with columns xl,yl,xr,yr")
    p.add_argument("--disturbance", required=True, help="x,y,z,a,b,g")
    p.set_defaults(func=_cmd_eval_epi)

    p = sub.add_parser("correlate", help="rank-correlate predictions against a manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--pred", required=True)
    p.set_defaults(func=_cmd_correlate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits; keep main() returning codes
        return int(exc.code or 0)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 2
    except (StereoMiscalError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
