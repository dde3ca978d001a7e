import json
import math
import subprocess
import sys

import cv2
import numpy as np
import pytest

NS = 1_000_000_000


def write_texture(path, height, width, seed):
    """Edge-rich test image (flat regions + fine grain), 16-bit PNG."""
    rng = np.random.default_rng(seed)
    coarse = cv2.GaussianBlur(rng.standard_normal((height, width)).astype(np.float32), (0, 0), 9.0)
    cuts = np.quantile(coarse, np.linspace(0, 1, 6)[1:-1])
    regions = np.digitize(coarse, cuts).astype(np.float32) / 4.0
    fine = cv2.GaussianBlur(rng.standard_normal((height, width)).astype(np.float32), (0, 0), 1.0)
    fine = 0.35 * (fine - fine.min()) / (fine.max() - fine.min())
    img = 0.6 * regions + fine
    img = 0.05 + 0.9 * (img - img.min()) / (img.max() - img.min())
    rgb = np.stack([np.clip(img + d, 0, 1) for d in (-0.02, 0.0, 0.02)], axis=-1)
    cv2.imwrite(str(path), np.round(rgb[:, :, ::-1] * 65535).astype(np.uint16))


def write_track(path, duration, amplitude, seed, rate=200.0):
    """Sinusoid-mix angular rates in the gyro CSV format the pipeline reads."""
    rng = np.random.default_rng(seed)
    t = np.arange(0.0, duration, 1.0 / rate)
    env = 0.15 + 0.85 * np.sin(math.pi * t / duration) ** 2
    omega = np.zeros((t.size, 3))
    for axis in range(3):
        sig = np.zeros_like(t)
        for _ in range(4):
            freq = math.exp(rng.uniform(math.log(0.3), math.log(6.0)))
            sig += amplitude * rng.uniform(0.15, 0.6) * np.sin(
                2 * math.pi * freq * t + rng.uniform(0, 2 * math.pi)
            )
        omega[:, axis] = sig * env
    lines = [
        f"{round(ti * NS)},{w[0]!r},{w[1]!r},{w[2]!r}"
        for ti, w in zip(t.tolist(), omega.tolist())
    ]
    path.write_text("\n".join(lines) + "\n")


def run_gen_dataset(img_dir, imu_dir, count, out_dir, seed, extra=()):
    """Dataset production through the synthesis CLI (the package boundary)."""
    cmd = [
        "gyroblur", "gen-dataset",
        "--images", str(img_dir), "--imu", str(imu_dir),
        "--count", str(count), "--out", str(out_dir), "--seed", str(seed),
        *map(str, extra),
    ]
    subprocess.run(cmd, check=True, capture_output=True, text=True)
    return out_dir / "manifest.jsonl"


def make_dataset(tmp_dir, count, seed, size=(128, 128), amplitudes=(0.6, 1.8), n_textures=3):
    img_dir = tmp_dir / "images"
    imu_dir = tmp_dir / "imu"
    out_dir = tmp_dir / "samples"
    img_dir.mkdir(parents=True)
    imu_dir.mkdir(parents=True)
    for i in range(n_textures):
        write_texture(img_dir / f"tex{i}.png", size[0], size[1], seed=seed * 97 + i)
    for i, amp in enumerate(amplitudes):
        write_track(imu_dir / f"trk{i}.csv", duration=3.0, amplitude=amp, seed=seed * 131 + i)
    return run_gen_dataset(img_dir, imu_dir, count, out_dir, seed)


@pytest.fixture(scope="session")
def small_manifest(tmp_path_factory):
    """Six 64x64 samples for fast unit tests."""
    return make_dataset(tmp_path_factory.mktemp("small"), count=6, seed=5, size=(64, 64))


def psnr(a, b):
    mse = float(np.mean((a.astype(np.float64) - b.astype(np.float64)) ** 2))
    return math.inf if mse == 0 else 10.0 * math.log10(1.0 / mse)


def records_of(manifest):
    return [json.loads(line) for line in open(manifest)]
