"""Training/evaluation data synthesis from gyro tracks and sharp images.

Each sample carries two fields: the exact one used to blur the sharp image,
and a noisy one computed after perturbing the gyro data (exposure delay plus
a rate-scale error), standing in for what a real IMU pipeline would estimate.

All randomness flows through seeded PCG64 generators; per-sample seeds are
blake2b hashes of (master seed, index), so a dataset is a pure function of
its inputs and the master seed, and any prefix of it can be regenerated
byte-for-byte.
"""

from __future__ import annotations

import hashlib
import json
import math
import multiprocessing
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
import scipy.ndimage

from . import _kernels
from .blurfield import BlurField, compute_blur_field, write_blf
from .errors import (
    DimensionMismatchError,
    InvalidValueError,
    NoImagesFoundError,
    NoTracksFoundError,
    TrackTooShortError,
)
from .images import channels_of, load_image, save_image
from .imu_io import FrameMeta, GyroTrack, Intrinsics, load_gyro_csv, load_intrinsics

SCALE_ONE_PLUS_K = "multiplicative_one_plus_k"
SCALE_LITERAL_K = "literal_k"


@dataclass(frozen=True)
class PerturbParams:
    """Gyro perturbation used for the noisy field.

    `sigma_delay` is the std-dev of the exposure-start delay in seconds;
    `sigma_scale` the std-dev of the rate-scale error k. In the default mode
    rates are multiplied by (1 + k); `literal_k` multiplies by k alone.
    """

    sigma_delay: float = 1e-5
    sigma_scale: float = 0.2
    scale_mode: str = SCALE_ONE_PLUS_K
    seed: int = 0

    def __post_init__(self):
        if self.sigma_delay < 0 or self.sigma_scale < 0:
            raise InvalidValueError("perturbation sigmas must be >= 0")
        if self.scale_mode not in (SCALE_ONE_PLUS_K, SCALE_LITERAL_K):
            raise InvalidValueError(f"unknown scale_mode {self.scale_mode!r}")


@dataclass(frozen=True)
class GenParams:
    """Sample-generation knobs (defaults follow the production recipe)."""

    t_e: float = 0.030
    t_r_range: tuple[float, float] = (0.0, 0.030)
    omega_multiplier: float = 2.0
    max_blur_px: float = 100.0
    noise_db: float = 30.0  # evaluation noise level; not applied during generation
    seed: int = 0

    def __post_init__(self):
        lo, hi = self.t_r_range
        if lo < 0 or hi < lo:
            raise InvalidValueError("t_r_range must be non-negative and ordered")
        if self.t_e <= 0 or self.max_blur_px <= 0:
            raise InvalidValueError("t_e and max_blur_px must be positive")


@dataclass(frozen=True)
class PerturbResult:
    meta: FrameMeta
    track: GyroTrack
    t_d: float
    k: float


@dataclass
class DatasetSample:
    sharp: np.ndarray
    blurred: np.ndarray
    exact_field: BlurField
    noisy_field: BlurField
    record: dict


def derive_seed(*parts) -> int:
    """Portable 64-bit seed from arbitrary parts (blake2b of their repr)."""
    payload = ":".join(repr(p) for p in parts).encode()
    return int.from_bytes(hashlib.blake2b(payload, digest_size=8).digest(), "little")


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def apply_blur_field(sharp: np.ndarray, fld: BlurField) -> np.ndarray:
    """Spatially-variant blur: per pixel, average S uniform bilinear taps
    along the segment from the pixel to pixel + (u, v), clamp-to-edge.
    """
    channels_of(sharp)
    if sharp.shape[:2] != fld.shape:
        raise DimensionMismatchError(
            f"image {sharp.shape[:2]} vs field {fld.shape}"
        )
    u = fld.u.astype(np.float64)
    v = fld.v.astype(np.float64)
    out = np.empty(sharp.shape, np.float32)
    if sharp.ndim == 2:
        planes = [(sharp, out)]
    else:
        planes = [(sharp[:, :, c], out[:, :, c]) for c in range(sharp.shape[2])]
    buf = np.empty(fld.shape, np.float64)
    for src, dst in planes:
        _kernels.blur_forward(src.astype(np.float64), u, v, buf)
        dst[:] = buf.astype(np.float32)
    return out


def add_gaussian_noise(
    img: np.ndarray, level_db: float, seed: int, reference: str = "peak"
) -> np.ndarray:
    """Add i.i.d. Gaussian noise at the given level in dB and clamp to [0, 1].

    With the default ``reference="peak"`` the level is PSNR-referenced:
    sigma = 10^(-dB/20) of full scale. ``reference="signal"`` uses the image
    RMS instead (signal-power SNR).
    """
    if not level_db > 0:
        raise InvalidValueError(f"noise level must be > 0 dB, got {level_db}")
    if reference == "peak":
        sigma = 10.0 ** (-level_db / 20.0)
    elif reference == "signal":
        sigma = float(np.sqrt(np.mean(np.square(img, dtype=np.float64)))) * 10.0 ** (
            -level_db / 20.0
        )
    else:
        raise InvalidValueError(f"unknown noise reference {reference!r}")
    noise = _rng(seed).standard_normal(img.shape) * sigma
    return np.clip(img.astype(np.float64) + noise, 0.0, 1.0).astype(np.float32)


def perturb_track(
    track: GyroTrack, meta: FrameMeta, params: PerturbParams
) -> PerturbResult:
    """Draw the exposure delay t_d and rate-scale k, apply both."""
    rng = _rng(params.seed)
    t_d = float(rng.normal(0.0, params.sigma_delay)) if params.sigma_delay > 0 else 0.0
    k = float(rng.normal(0.0, params.sigma_scale)) if params.sigma_scale > 0 else 0.0
    factor = (1.0 + k) if params.scale_mode == SCALE_ONE_PLUS_K else k
    if params.sigma_scale == 0.0:
        factor = 1.0
    new_meta = replace(meta, t_f=meta.t_f + t_d)
    return PerturbResult(meta=new_meta, track=track.scaled(factor), t_d=t_d, k=k)


def _clamped_exact_field(
    track: GyroTrack, meta: FrameMeta, K: Intrinsics, gp: GenParams
) -> tuple[BlurField, float, GyroTrack]:
    """Exact field with the blur cap enforced by rescaling the rates.

    Rescaling keeps the blurred image and its field mutually consistent;
    truncating individual vectors would not. Blur is nearly linear in the
    rate scale, so a couple of passes suffice.
    """
    mult = gp.omega_multiplier
    eff = track.scaled(mult)
    fld = compute_blur_field(eff, meta, K)
    for _ in range(8):
        peak = float(fld.magnitude().max())
        if peak <= gp.max_blur_px + 1e-6:
            break
        mult *= gp.max_blur_px / peak
        eff = track.scaled(mult)
        fld = compute_blur_field(eff, meta, K)
    return fld, mult, eff


def generate_sample(
    sharp: np.ndarray,
    track: GyroTrack,
    K: Intrinsics,
    gp: GenParams,
    pp: PerturbParams,
) -> DatasetSample:
    """One training sample: random exposure placement, exact + noisy fields."""
    h, w = sharp.shape[:2]
    rng = _rng(gp.seed)
    t_r_max = gp.t_r_range[1]
    margin = max(1e-3, 10.0 * pp.sigma_delay)
    lo = track.t_start + margin
    hi = track.t_end - gp.t_e - t_r_max - margin
    if hi <= lo:
        raise TrackTooShortError(
            f"track span {track.t_end - track.t_start:.3f}s cannot hold a "
            f"{gp.t_e + t_r_max:.3f}s exposure window"
        )
    t_f = float(rng.uniform(lo, hi))
    t_r = float(rng.uniform(gp.t_r_range[0], gp.t_r_range[1]))
    meta = FrameMeta(t_f=t_f, t_e=gp.t_e, t_r=t_r, rows=h, cols=w)

    exact, mult_eff, eff_track = _clamped_exact_field(track, meta, K, gp)
    blurred = apply_blur_field(sharp, exact)
    pr = perturb_track(eff_track, meta, pp)
    noisy = compute_blur_field(pr.track, pr.meta, K)

    record = {
        "t_f": t_f,
        "t_e": gp.t_e,
        "t_r": t_r,
        "omega_multiplier_effective": mult_eff,
        "k": pr.k,
        "t_d": pr.t_d,
    }
    return DatasetSample(sharp, blurred, exact, noisy, record)


def default_intrinsics(rows: int, cols: int) -> Intrinsics:
    """Principal point at the center, ~60 degree horizontal field of view."""
    f = 0.9 * max(rows, cols)
    return Intrinsics(fx=f, fy=f, cx=cols / 2.0, cy=rows / 2.0)


def _list_inputs(image_dir, imu_dir):
    images = sorted(
        os.path.join(image_dir, n)
        for n in os.listdir(image_dir)
        if n.lower().endswith(".png")
    )
    tracks = sorted(
        os.path.join(imu_dir, n)
        for n in os.listdir(imu_dir)
        if n.lower().endswith(".csv")
    )
    if not images:
        raise NoImagesFoundError(f"no .png images in {image_dir}")
    if not tracks:
        raise NoTracksFoundError(f"no .csv gyro logs in {imu_dir}")
    return images, tracks


def _generate_one(args) -> dict:
    (index, image_path, track_path, out_dir, gp, pp, intrinsics_path) = args
    sharp = load_image(image_path)
    track = load_gyro_csv(track_path)
    if intrinsics_path is None:
        K = default_intrinsics(*sharp.shape[:2])
    else:
        K = load_intrinsics(intrinsics_path)
    sample = generate_sample(sharp, track, K, gp, pp)

    names = {
        "sharp": f"sharp_{index:06d}.png",
        "blurred": f"blur_{index:06d}.png",
        "exact_field": f"exact_{index:06d}.blf",
        "noisy_field": f"noisy_{index:06d}.blf",
    }
    save_image(os.path.join(out_dir, names["sharp"]), sample.sharp)
    save_image(os.path.join(out_dir, names["blurred"]), sample.blurred)
    write_blf(os.path.join(out_dir, names["exact_field"]), sample.exact_field)
    write_blf(os.path.join(out_dir, names["noisy_field"]), sample.noisy_field)

    record = {"index": index, **names, "seed": gp.seed, **sample.record}
    return record


def generate_dataset(
    image_dir,
    imu_dir,
    count: int,
    out_dir,
    gp: GenParams = GenParams(),
    pp: PerturbParams = PerturbParams(),
    jobs: int = 1,
    intrinsics_path=None,
) -> str:
    """Produce `count` samples plus a JSON-lines manifest; returns its path.

    Per-sample seeds are hash(master, index); the image and track for each
    sample are drawn with that seed, so sample i is identical no matter how
    many samples surround it or how many workers run.
    """
    images, tracks = _list_inputs(image_dir, imu_dir)
    os.makedirs(out_dir, exist_ok=True)

    tasks = []
    for i in range(count):
        s = derive_seed(gp.seed, i)
        pick = _rng(derive_seed(s, "pick"))
        image_path = images[int(pick.integers(len(images)))]
        track_path = tracks[int(pick.integers(len(tracks)))]
        gp_i = replace(gp, seed=derive_seed(s, "gen"))
        pp_i = replace(pp, seed=derive_seed(s, "perturb"))
        tasks.append((i, image_path, track_path, out_dir, gp_i, pp_i, intrinsics_path))

    if jobs > 1 and tasks:
        # spawned workers: the JIT runtime's thread pool does not survive fork
        ctx = multiprocessing.get_context("spawn")
        with ProcessPoolExecutor(max_workers=jobs, mp_context=ctx) as pool:
            records = list(pool.map(_generate_one, tasks))
    else:
        records = [_generate_one(t) for t in tasks]

    records.sort(key=lambda r: r["index"])
    manifest_path = os.path.join(out_dir, "manifest.jsonl")
    with open(manifest_path, "w") as f:
        for rec in records:
            f.write(json.dumps(rec) + "\n")
    return manifest_path


# --- synthetic inputs for demos and tests ----------------------------------------

def make_shake_track(
    duration: float = 4.0,
    rate_hz: float = 200.0,
    amplitude: float = 1.0,
    seed: int = 0,
) -> GyroTrack:
    """Handheld-like angular rates: per-axis sinusoid mixes under a smooth
    envelope that is quiet at the ends of the track, so randomly placed
    exposure windows see blur levels from near zero up to the full amplitude.
    """
    rng = _rng(seed)
    t = np.arange(0.0, duration, 1.0 / rate_hz)
    env = 0.15 + 0.85 * np.sin(math.pi * t / duration) ** 2
    omega = np.zeros((t.size, 3))
    for axis in range(3):
        sig = np.zeros_like(t)
        for _ in range(4):
            freq = math.exp(rng.uniform(math.log(0.3), math.log(6.0)))
            phase = rng.uniform(0.0, 2.0 * math.pi)
            amp = amplitude * rng.uniform(0.15, 0.6)
            sig += amp * np.sin(2.0 * math.pi * freq * t + phase)
        omega[:, axis] = sig * env
    return GyroTrack(t=t, omega=omega)


def make_texture(
    height: int, width: int, seed: int = 0, channels: int = 3
) -> np.ndarray:
    """Deterministic natural-image stand-in in [0.05, 0.95].

    Piecewise-flat regions (step edges) plus fine-grained detail, the two
    components deconvolution and metric tests actually exercise.
    """
    rng = _rng(seed)
    coarse = scipy.ndimage.gaussian_filter(rng.standard_normal((height, width)), 9.0)
    cuts = np.quantile(coarse, np.linspace(0.0, 1.0, 6)[1:-1])
    regions = np.digitize(coarse, cuts).astype(np.float64) / 4.0
    fine = scipy.ndimage.gaussian_filter(rng.standard_normal((height, width)), 1.0)
    fine = 0.35 * (fine - fine.min()) / (fine.max() - fine.min())
    img = 0.6 * regions + fine
    img = 0.05 + 0.9 * (img - img.min()) / (img.max() - img.min())
    if channels == 1:
        return img.astype(np.float32)
    out = np.empty((height, width, 3), np.float32)
    for c in range(3):
        tint = scipy.ndimage.gaussian_filter(rng.standard_normal((height, width)), 8.0)
        tint = 0.08 * (tint - tint.min()) / max(tint.max() - tint.min(), 1e-9)
        out[:, :, c] = np.clip(img + tint - 0.04, 0.0, 1.0)
    return out
