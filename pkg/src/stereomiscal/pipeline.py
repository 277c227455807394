"""Dataset generation, sweeps and correlation reports, plus config/manifest I/O.

Configuration is a single JSON document, units meters / radians / pixels::

    {
      "calibration": {
        "left":  {"fx": 718.0, "fy": 718.0, "cx": 621.0, "cy": 187.5,
                  "dist": [0, 0, 0, 0, 0], "image_size": [1242, 375]},
        "right": { ... same shape ... },
        "extrinsics": {"rotvec": [0.0, 0.0, 0.0],
                       "translation": [-0.537, 0.0, 0.0]}
      },
      "d_thr": 0.05,
      "n_samples": 200,
      "base_seed": 0,
      "scene": {"n_points": 200, "depth_range": [6.0, 40.0],
                "lateral_extent": 8.0, "texture": "value-noise",
                "texture_cell": 0.5, "texture_octaves": 3,
                "quad_depths": [8.0, 14.0, 25.0], "n_scenes": 0},
      "output_dir": "out",
      "crop_mode": "joint"
    }

``extrinsics`` maps left-camera points into the right-camera frame
(X_r = R @ X_l + t); a rig calibrated the other way round is expressed by
inverting the transform. The dataset manifest is JSON-lines, one sample
record per line, numeric fields written with full float repr so reruns
are byte-identical.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import ConfigError, DegenerateBaseline, MissingIds, NoValidRect
from .geometry import CameraIntrinsics, RigidTransform
from .metrics import epipolar_error, spearman
from .rectify import StereoCalibration, build_map, stereo_rectify
from .synth import (
    SceneConfig,
    _rng,
    generate_points,
    project_correspondences,
    render_pair,
    sample_disturbance,
)
from .validregion import CropRect, joint_crop, largest_aspect_rect
from .wode import DOF_NAMES, disturb_calibration, wode_normalized

_TAG_SPLIT = 4


@dataclass(frozen=True)
class PipelineConfig:
    calibration: StereoCalibration
    d_thr: float
    n_samples: int
    base_seed: int
    scene: SceneConfig
    output_dir: str
    crop_mode: str = "joint"

    def __post_init__(self):
        if self.n_samples < 1:
            raise ConfigError("n_samples must be >= 1")
        if self.d_thr <= 0:
            raise ConfigError("d_thr must be positive")
        if self.crop_mode not in ("joint", "per-image"):
            raise ConfigError(f"unknown crop_mode {self.crop_mode!r}")


@dataclass
class SampleRecord:
    """One dataset row; ``wode`` fields are None when the disturbed rig
    could not be rectified."""

    id: int
    seed: int
    disturbance: list[float]
    wode: float | None
    wode_normalized: float | None
    delta_thr: float | None
    left_path: str | None
    right_path: str | None
    crop: dict | None
    status: str
    split: str | None = None
    crop_right: dict | None = None  # only in per-image crop mode


# --- config (de)serialization ---------------------------------------------


def camera_from_json(d: dict) -> CameraIntrinsics:
    return CameraIntrinsics(
        fx=float(d["fx"]),
        fy=float(d["fy"]),
        cx=float(d["cx"]),
        cy=float(d["cy"]),
        dist=np.asarray(d.get("dist", [0, 0, 0, 0, 0]), dtype=float),
        image_size=(int(d["image_size"][0]), int(d["image_size"][1])),
    )


def camera_to_json(cam: CameraIntrinsics) -> dict:
    return {
        "fx": cam.fx,
        "fy": cam.fy,
        "cx": cam.cx,
        "cy": cam.cy,
        "dist": list(map(float, cam.dist)),
        "image_size": list(cam.image_size),
    }


def calibration_from_json(d: dict) -> StereoCalibration:
    ext = d["extrinsics"]
    return StereoCalibration(
        left=camera_from_json(d["left"]),
        right=camera_from_json(d["right"]),
        extrinsics=RigidTransform(
            rotation=np.asarray(ext["rotvec"], dtype=float),
            translation=np.asarray(ext["translation"], dtype=float),
        ),
    )


def calibration_to_json(calib: StereoCalibration) -> dict:
    return {
        "left": camera_to_json(calib.left),
        "right": camera_to_json(calib.right),
        "extrinsics": {
            "rotvec": list(map(float, calib.extrinsics.rotation)),
            "translation": list(map(float, calib.extrinsics.translation)),
        },
    }


def validate_config_dict(d: dict) -> list[str]:
    """All validation problems at once, so the CLI can report them before
    any work starts."""
    problems: list[str] = []
    if "calibration" not in d:
        problems.append("missing key: calibration")
    else:
        try:
            calibration_from_json(d["calibration"])
        except (KeyError, ValueError, TypeError) as exc:
            problems.append(f"calibration: {exc}")
    if not isinstance(d.get("d_thr"), (int, float)) or d.get("d_thr", 0) <= 0:
        problems.append("d_thr must be a positive number")
    if not isinstance(d.get("n_samples", 1), int) or d.get("n_samples", 1) < 1:
        problems.append("n_samples must be a positive integer")
    if not isinstance(d.get("base_seed", 0), int) or d.get("base_seed", 0) < 0:
        problems.append("base_seed must be a non-negative integer")
    try:
        scene_from_json(d.get("scene", {}))
    except (ValueError, TypeError) as exc:
        problems.append(f"scene: {exc}")
    if d.get("crop_mode", "joint") not in ("joint", "per-image"):
        problems.append("crop_mode must be 'joint' or 'per-image'")
    return problems


def scene_from_json(d: dict) -> SceneConfig:
    kwargs = {}
    for key in (
        "n_points",
        "lateral_extent",
        "texture",
        "texture_cell",
        "texture_octaves",
        "n_scenes",
    ):
        if key in d:
            kwargs[key] = d[key]
    if "depth_range" in d:
        kwargs["depth_range"] = tuple(map(float, d["depth_range"]))
    if "quad_depths" in d:
        kwargs["quad_depths"] = tuple(map(float, d["quad_depths"]))
    return SceneConfig(**kwargs)


def load_config(path: str | Path, **overrides) -> PipelineConfig:
    with open(path) as fh:
        d = json.load(fh)
    problems = validate_config_dict(d)
    if problems:
        raise ConfigError("; ".join(problems))
    cfg = PipelineConfig(
        calibration=calibration_from_json(d["calibration"]),
        d_thr=float(d["d_thr"]),
        n_samples=int(d.get("n_samples", 1)),
        base_seed=int(d.get("base_seed", 0)),
        scene=scene_from_json(d.get("scene", {})),
        output_dir=str(d.get("output_dir", "out")),
        crop_mode=str(d.get("crop_mode", "joint")),
    )
    if overrides:
        from dataclasses import replace

        cfg = replace(cfg, **{k: v for k, v in overrides.items() if v is not None})
    return cfg


# --- image I/O -------------------------------------------------------------


def write_image(path: str | Path, img: np.ndarray) -> None:
    """8-bit grayscale PNG from a float image in [0, 1]."""
    data = np.clip(np.asarray(img, dtype=float), 0.0, 1.0)
    Image.fromarray((data * 255.0).round().astype(np.uint8), mode="L").save(path)


def read_image(path: str | Path) -> np.ndarray:
    """Grayscale float image in [0, 1]."""
    with Image.open(path) as im:
        return np.asarray(im.convert("L"), dtype=float) / 255.0


# --- dataset generation ------------------------------------------------------


def _record_to_line(rec: SampleRecord) -> str:
    d = asdict(rec)
    for key in ("split", "crop_right"):
        if d.get(key) is None:
            d.pop(key)
    return json.dumps(d)


def generate_dataset(
    cfg: PipelineConfig,
    split_fraction: float | None = None,
    force_disturbance=None,
) -> list[SampleRecord]:
    """Run the full semi-synthetic pipeline and write manifest + images.

    Per sample: draw a disturbance, rectify the disturbed rig, render the
    physical raw views, remap, crop to the joint valid region, resize back
    to the raw size, and record the normalized disturbance score. Samples
    whose rectification degenerates or whose valid region is too small are
    recorded with ``status = "rejected_no_rect"`` and no images.

    ``force_disturbance`` replaces the sampled disturbance on every sample
    (test hook).
    """
    out_dir = Path(cfg.output_dir)
    (out_dir / "images").mkdir(parents=True, exist_ok=True)
    calib = cfg.calibration
    w, h = calib.left.image_size
    aspect = w / h

    split_of: dict[int, str] = {}
    if split_fraction is not None:
        if not 0.0 < split_fraction < 1.0:
            raise ConfigError("split fraction must be in (0, 1)")
        ids = np.arange(cfg.n_samples)
        _rng(cfg.base_seed, _TAG_SPLIT).shuffle(ids)
        n_train = int(round(split_fraction * cfg.n_samples))
        split_of = {int(i): ("train" if k < n_train else "test") for k, i in enumerate(ids)}

    records: list[SampleRecord] = []
    with open(out_dir / "manifest.jsonl", "w") as manifest:
        for sample_id in range(cfg.n_samples):
            seed = cfg.base_seed + sample_id
            if force_disturbance is None:
                d = sample_disturbance(seed, cfg.d_thr)
            else:
                d = np.asarray(force_disturbance, dtype=float).reshape(6)
            rec = SampleRecord(
                id=sample_id,
                seed=seed,
                disturbance=[float(v) for v in d],
                wode=None,
                wode_normalized=None,
                delta_thr=None,
                left_path=None,
                right_path=None,
                crop=None,
                status="rejected_no_rect",
                split=split_of.get(sample_id),
            )
            try:
                result = wode_normalized(calib, d, cfg.d_thr)
                rect = stereo_rectify(disturb_calibration(calib, d))
            except DegenerateBaseline:
                records.append(rec)
                manifest.write(_record_to_line(rec) + "\n")
                continue
            rec.wode = result.delta
            rec.wode_normalized = result.delta_norm
            rec.delta_thr = result.delta_thr

            maps = (build_map(calib, rect, "left"), build_map(calib, rect, "right"))
            mask_l, mask_r = maps[0].validity_mask(), maps[1].validity_mask()
            try:
                if cfg.crop_mode == "joint":
                    crop = joint_crop(mask_l, mask_r, aspect)
                    crops: CropRect | tuple[CropRect, CropRect] = crop
                else:
                    crop = largest_aspect_rect(mask_l, aspect)
                    crops = (crop, largest_aspect_rect(mask_r, aspect))
            except NoValidRect:
                records.append(rec)
                manifest.write(_record_to_line(rec) + "\n")
                continue

            scene_seed = seed
            if cfg.scene.n_scenes > 0:
                scene_seed = cfg.base_seed + (sample_id % cfg.scene.n_scenes)
            img_l, img_r = render_pair(scene_seed, cfg.scene, calib, rect, crops, maps=maps)
            left_rel = f"images/{sample_id:06d}_left.png"
            right_rel = f"images/{sample_id:06d}_right.png"
            write_image(out_dir / left_rel, img_l)
            write_image(out_dir / right_rel, img_r)
            rec.left_path = left_rel
            rec.right_path = right_rel
            rec.crop = {"x": crop.x, "y": crop.y, "w": crop.w, "h": crop.h}
            if isinstance(crops, tuple):
                cr = crops[1]
                rec.crop_right = {"x": cr.x, "y": cr.y, "w": cr.w, "h": cr.h}
            rec.status = "ok"
            records.append(rec)
            manifest.write(_record_to_line(rec) + "\n")
    return records


# --- sweeps ------------------------------------------------------------------


def sweep(cfg: PipelineConfig, dof: int, d_max: float, steps: int) -> list[dict]:
    """Both metrics along one degree of freedom, d in [-d_max, +d_max].

    Rows where the disturbed rig cannot be rectified or no synthetic match
    stays visible are flagged in ``status`` instead of aborting the sweep.
    """
    if steps < 2:
        raise ConfigError("steps must be >= 2")
    calib = cfg.calibration
    rect_true = stereo_rectify(calib)
    points = generate_points(cfg.base_seed, cfg.scene)
    rows: list[dict] = []
    for d_val in np.linspace(-d_max, d_max, steps):
        d = np.zeros(6)
        d[dof] = d_val
        row = {
            "d": float(d_val),
            "wode": None,
            "e_epi": None,
            "n_visible": 0,
            "status": "ok",
        }
        try:
            result = wode_normalized(calib, d, cfg.d_thr)
            rect_d = stereo_rectify(disturb_calibration(calib, d))
        except DegenerateBaseline:
            row["status"] = "degenerate"
            rows.append(row)
            continue
        row["wode"] = result.delta
        matches = project_correspondences(points, calib, rect_true, rect_d)
        row["n_visible"] = len(matches)
        if matches:
            row["e_epi"] = epipolar_error(matches)
        else:
            row["status"] = "no_matches"
        rows.append(row)
    return rows


def write_sweep_csv(rows: list[dict], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["d", "wode", "e_epi", "n_visible", "status"])
        for row in rows:
            writer.writerow(
                [
                    repr(row["d"]),
                    "" if row["wode"] is None else repr(row["wode"]),
                    "" if row["e_epi"] is None else repr(row["e_epi"]),
                    row["n_visible"],
                    row["status"],
                ]
            )


def dof_index(name: str) -> int:
    try:
        return DOF_NAMES.index(name)
    except ValueError:
        raise ConfigError(f"dof must be one of {DOF_NAMES}") from None


# --- correlation report -------------------------------------------------------


def read_manifest(path: str | Path) -> list[SampleRecord]:
    records = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            d = json.loads(line)
            records.append(SampleRecord(**d))
    return records


def correlate(manifest_path: str | Path, predictions_path: str | Path) -> dict:
    """Join predictions (CSV: id,pred) against manifest labels by id.

    Returns rho / p from the rank correlation and the standard deviation
    of the residuals about their mean. Prediction ids must all resolve to
    ok-status manifest rows.
    """
    labels = {
        rec.id: rec.wode_normalized
        for rec in read_manifest(manifest_path)
        if rec.status == "ok"
    }
    ids: list[int] = []
    preds: list[float] = []
    with open(predictions_path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"id", "pred"}.issubset(reader.fieldnames):
            raise ConfigError("predictions CSV must have columns id,pred")
        for row in reader:
            ids.append(int(row["id"]))
            preds.append(float(row["pred"]))
    if not ids:
        raise MissingIds("no predictions")
    missing = [i for i in ids if i not in labels]
    if missing:
        raise MissingIds(f"{len(missing)} prediction ids not in manifest (e.g. {missing[:5]})")
    truth = np.array([labels[i] for i in ids])
    pred = np.array(preds)
    rho, p = spearman(pred, truth)
    return {
        "n": len(ids),
        "rho": rho,
        "p": p,
        "sigma": float(np.std(pred - truth)),
    }
