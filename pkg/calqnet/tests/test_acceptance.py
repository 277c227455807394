"""Secondary acceptance: toy-scale regressor quality on a 2000-sample set.

The dataset is produced by the generator CLI at 192x64, the model trains
with the default recipe, and the held-out predictions are scored by the
generator's correlate command — the full external-interface loop. Takes
several minutes; run with ``pytest tests/test_acceptance.py -s``.
"""

from __future__ import annotations

import json
import subprocess
import sys
import time

import pytest

from calqnet import ModelSpec, TrainConfig, evaluate, load_pairs, train

from conftest import dataset_config, generate_dataset_cli

INPUT = (192, 64)


@pytest.fixture(scope="module")
def full_manifest(tmp_path_factory):
    # single repeated scene with a strongly structured texture: the
    # evaluation regime is unseen disturbances of a seen scene, and the
    # regular pattern makes the rectification warp directly readable
    tmp = tmp_path_factory.mktemp("calqnet_acceptance")
    cfg = dataset_config(
        str(tmp / "out"), n_samples=2000, image_size=INPUT, n_scenes=1, texture="checker"
    )
    return generate_dataset_cli(cfg, tmp)


def test_criterion_10_toy_regressor(full_manifest, tmp_path):
    t0 = time.perf_counter()
    spec = ModelSpec(input_size=INPUT)
    cfg = TrainConfig(epochs=60, batch=32, seed=0)
    train_ds = load_pairs(full_manifest, "train", INPUT, seed=cfg.seed)
    test_ds = load_pairs(full_manifest, "test", INPUT, seed=cfg.seed)
    model, curve = train(spec, cfg, train_ds, loss_curve_path=tmp_path / "loss_curve.csv")
    train_minutes = (time.perf_counter() - t0) / 60.0

    preds = tmp_path / "preds.csv"
    evaluate(model, test_ds, predictions_csv=preds)
    proc = subprocess.run(
        [sys.executable, "-m", "stereomiscal.cli", "correlate",
         "--manifest", str(full_manifest), "--pred", str(preds)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    report = json.loads(proc.stdout)

    ok = (
        report["rho"] >= 0.7
        and report["sigma"] <= 0.25
        and curve[-1] <= 0.5 * curve[0]
        and train_minutes <= 30.0
    )
    line = (
        f"[{'PASS' if ok else 'FAIL'}] criterion 10: toy regressor  "
        f"(held-out rho={report['rho']:.3f} >= 0.7, sigma={report['sigma']:.3f} <= 0.25, "
        f"loss {curve[0]:.3f} -> {curve[-1]:.3f}, train {train_minutes:.1f} min <= 30)"
    )
    print(line)
    assert ok, line
