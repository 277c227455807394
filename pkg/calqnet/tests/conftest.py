from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

# a small wide-baseline rig; the dataset is produced by the generator CLI,
# which is the only interface this package consumes
SMALL_RIG = {
    "fx": 55.5,
    "fy": 55.5,
    "cx": 48.0,
    "cy": 16.0,
    "dist": [0.0, 0.0, 0.0, 0.0, 0.0],
    "image_size": [96, 32],
}


def dataset_config(
    out_dir: str, n_samples: int, image_size=(96, 32), n_scenes=4, texture="value-noise"
) -> dict:
    w, h = image_size
    cam = dict(SMALL_RIG)
    cam["image_size"] = [w, h]
    cam["fx"] = cam["fy"] = 718.0 * w / 1242.0
    cam["cx"], cam["cy"] = w / 2.0, h / 2.0
    return {
        "calibration": {
            "left": cam,
            "right": cam,
            "extrinsics": {"rotvec": [0.0, 0.0, 0.0], "translation": [-0.537, 0.0, 0.0]},
        },
        "d_thr": 0.05,
        "n_samples": n_samples,
        "base_seed": 0,
        "scene": {
            "n_points": 50,
            "depth_range": [6.0, 40.0],
            "lateral_extent": 8.0,
            "texture": texture,
            "texture_cell": 0.5,
            "texture_octaves": 3,
            "quad_depths": [8.0, 14.0, 25.0],
            "n_scenes": n_scenes,
        },
        "output_dir": out_dir,
        "crop_mode": "joint",
    }


def generate_dataset_cli(config: dict, tmp_dir: Path) -> Path:
    config_path = tmp_dir / "config.json"
    config_path.write_text(json.dumps(config))
    proc = subprocess.run(
        [sys.executable, "-m", "stereomiscal.cli", "generate", "--config", str(config_path)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    return Path(config["output_dir"]) / "manifest.jsonl"


@pytest.fixture(scope="session")
def small_manifest(tmp_path_factory) -> Path:
    tmp = tmp_path_factory.mktemp("calqnet_data")
    return generate_dataset_cli(dataset_config(str(tmp / "out"), n_samples=160), tmp)
