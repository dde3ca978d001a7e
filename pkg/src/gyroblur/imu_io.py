"""Gyroscope log parsing and frame/calibration metadata.

The gyro log format is a plain CSV used by common visual-inertial datasets:
``timestamp_ns,gx,gy,gz[,ax,ay,az]`` with ``#`` comment lines. Accelerometer
columns are tolerated and dropped; translation is not recovered anywhere in
this package.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    EmptyTrackError,
    InvalidValueError,
    MalformedLineError,
    MissingFieldError,
    NonMonotonicTimestampsError,
    OutOfRangeError,
)

NS_PER_S = 1_000_000_000


@dataclass(frozen=True)
class GyroSample:
    """One angular-rate measurement: time in seconds, body rate in rad/s."""

    t: float
    omega: np.ndarray  # shape (3,)


@dataclass(frozen=True)
class GyroTrack:
    """Time-ordered angular-rate samples.

    `t` is an (N,) float64 array of seconds (strictly increasing), `omega`
    an (N, 3) float64 array of rad/s. Arrays are frozen after construction
    and safe to share across threads.
    """

    t: np.ndarray
    omega: np.ndarray

    def __post_init__(self):
        t = np.ascontiguousarray(self.t, dtype=np.float64)
        om = np.ascontiguousarray(self.omega, dtype=np.float64)
        if t.ndim != 1 or om.shape != (t.size, 3):
            raise InvalidValueError("track arrays must be (N,) and (N, 3)")
        if t.size == 0:
            raise EmptyTrackError("gyro track has no samples")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(om))):
            raise InvalidValueError("track contains non-finite values")
        if t.size > 1 and not np.all(np.diff(t) > 0):
            raise NonMonotonicTimestampsError("timestamps not strictly increasing")
        t.setflags(write=False)
        om.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "omega", om)

    def __len__(self):
        return self.t.size

    @property
    def t_start(self) -> float:
        return float(self.t[0])

    @property
    def t_end(self) -> float:
        return float(self.t[-1])

    @property
    def samples(self) -> list[GyroSample]:
        return [GyroSample(float(ti), oi.copy()) for ti, oi in zip(self.t, self.omega)]

    @classmethod
    def from_samples(cls, samples) -> "GyroTrack":
        if not samples:
            raise EmptyTrackError("no samples")
        return cls(
            t=np.array([s.t for s in samples], dtype=np.float64),
            omega=np.array([s.omega for s in samples], dtype=np.float64),
        )

    def scaled(self, factor: float) -> "GyroTrack":
        """Return a copy with every angular rate multiplied by `factor`."""
        return GyroTrack(t=self.t.copy(), omega=self.omega * float(factor))

    def rotated(self, rot: np.ndarray) -> "GyroTrack":
        """Return a copy with rates remapped by a 3x3 rotation (IMU->camera)."""
        return GyroTrack(t=self.t.copy(), omega=self.omega @ np.asarray(rot, dtype=np.float64).T)


@dataclass(frozen=True)
class FrameMeta:
    """Per-frame timing: frame timestamp, exposure, readout, raster size."""

    t_f: float
    t_e: float
    t_r: float
    rows: int
    cols: int

    def __post_init__(self):
        if not (math.isfinite(self.t_f) and math.isfinite(self.t_e) and math.isfinite(self.t_r)):
            raise InvalidValueError("frame timing must be finite")
        if self.t_e <= 0:
            raise InvalidValueError(f"t_e must be > 0, got {self.t_e}")
        if self.t_r < 0:
            raise InvalidValueError(f"t_r must be >= 0, got {self.t_r}")
        if self.rows < 1 or self.cols < 1:
            raise InvalidValueError("rows and cols must be >= 1")


@dataclass(frozen=True)
class Intrinsics:
    """Pinhole calibration (pixels) plus an optional IMU-to-camera rotation."""

    fx: float
    fy: float
    cx: float
    cy: float
    imu_to_cam: np.ndarray = field(default_factory=lambda: np.eye(3))

    def __post_init__(self):
        if not (self.fx > 0 and self.fy > 0):
            raise InvalidValueError("focal lengths must be positive")
        rot = np.ascontiguousarray(self.imu_to_cam, dtype=np.float64)
        if rot.shape != (3, 3):
            raise InvalidValueError("imu_to_cam must be 3x3")
        if not np.allclose(rot @ rot.T, np.eye(3), atol=1e-6) or np.linalg.det(rot) < 0:
            raise InvalidValueError("imu_to_cam must be a rotation matrix")
        rot.setflags(write=False)
        object.__setattr__(self, "imu_to_cam", rot)

    @property
    def K(self) -> np.ndarray:
        return np.array(
            [[self.fx, 0.0, self.cx], [0.0, self.fy, self.cy], [0.0, 0.0, 1.0]]
        )

    @property
    def K_inv(self) -> np.ndarray:
        return np.array(
            [
                [1.0 / self.fx, 0.0, -self.cx / self.fx],
                [0.0, 1.0 / self.fy, -self.cy / self.fy],
                [0.0, 0.0, 1.0],
            ]
        )

    @property
    def has_imu_rotation(self) -> bool:
        return not np.array_equal(self.imu_to_cam, np.eye(3))


def parse_gyro_csv(data: bytes | str) -> GyroTrack:
    """Parse a gyro CSV byte stream into a GyroTrack.

    Lines are ``timestamp_ns,gx,gy,gz`` with three optional trailing
    accelerometer columns (ignored). ``#`` lines and blank lines are skipped.
    Timestamps are converted from integer nanoseconds to float seconds.
    """
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as e:
            raise MalformedLineError(f"input is not UTF-8 text: {e}") from None
    else:
        text = data

    times: list[float] = []
    rates: list[tuple[float, float, float]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) not in (4, 7):
            raise MalformedLineError(
                f"line {lineno}: expected 4 or 7 columns, got {len(parts)}"
            )
        try:
            ts_ns = int(parts[0])
            gx, gy, gz = float(parts[1]), float(parts[2]), float(parts[3])
        except ValueError:
            raise MalformedLineError(f"line {lineno}: non-numeric field") from None
        if not (math.isfinite(gx) and math.isfinite(gy) and math.isfinite(gz)):
            raise MalformedLineError(f"line {lineno}: non-finite rate")
        t = ts_ns / NS_PER_S
        if times and t <= times[-1]:
            raise NonMonotonicTimestampsError(
                f"line {lineno}: timestamp {ts_ns} ns does not increase"
            )
        times.append(t)
        rates.append((gx, gy, gz))

    if not times:
        raise EmptyTrackError("no data lines in gyro CSV")
    return GyroTrack(t=np.array(times), omega=np.array(rates))


def dump_gyro_csv(track: GyroTrack) -> str:
    """Serialize a track back to CSV (ns timestamps, full-precision rates)."""
    lines = []
    for ti, (gx, gy, gz) in zip(track.t, track.omega):
        lines.append(
            f"{round(float(ti) * NS_PER_S)},{float(gx)!r},{float(gy)!r},{float(gz)!r}"
        )
    return "\n".join(lines) + "\n"


def load_gyro_csv(path) -> GyroTrack:
    with open(path, "rb") as f:
        return parse_gyro_csv(f.read())


def sample_omega(track: GyroTrack, t: float) -> np.ndarray:
    """Angular rate at time `t`, linearly interpolated between samples."""
    if t < track.t[0] or t > track.t[-1]:
        raise OutOfRangeError(
            f"t={t} outside track span [{track.t[0]}, {track.t[-1]}]"
        )
    out = np.empty(3)
    for k in range(3):
        out[k] = np.interp(t, track.t, track.omega[:, k])
    return out


def _require_keys(doc: dict, keys, what: str) -> None:
    for k in keys:
        if k not in doc:
            raise MissingFieldError(f"{what}: missing field '{k}'")


def _as_number(doc: dict, key: str, what: str) -> float:
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise InvalidValueError(f"{what}: field '{key}' must be a number")
    return float(v)


def parse_frame_meta(data: bytes | str) -> FrameMeta:
    """Parse frame metadata JSON: t_f, t_e, t_r in seconds; rows, cols."""
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as e:
        raise InvalidValueError(f"frame meta is not valid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise InvalidValueError("frame meta must be a JSON object")
    _require_keys(doc, ("t_f", "t_e", "t_r", "rows", "cols"), "frame meta")
    rows = doc["rows"]
    cols = doc["cols"]
    if not isinstance(rows, int) or not isinstance(cols, int) or isinstance(rows, bool):
        raise InvalidValueError("frame meta: rows/cols must be integers")
    return FrameMeta(
        t_f=_as_number(doc, "t_f", "frame meta"),
        t_e=_as_number(doc, "t_e", "frame meta"),
        t_r=_as_number(doc, "t_r", "frame meta"),
        rows=rows,
        cols=cols,
    )


def parse_intrinsics(data: bytes | str) -> Intrinsics:
    """Parse intrinsics JSON: fx, fy, cx, cy; optional 9-element imu_to_cam."""
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as e:
        raise InvalidValueError(f"intrinsics is not valid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise InvalidValueError("intrinsics must be a JSON object")
    _require_keys(doc, ("fx", "fy", "cx", "cy"), "intrinsics")
    kwargs = {k: _as_number(doc, k, "intrinsics") for k in ("fx", "fy", "cx", "cy")}
    if "imu_to_cam" in doc:
        rot = doc["imu_to_cam"]
        if not isinstance(rot, list) or len(rot) != 9:
            raise InvalidValueError("intrinsics: imu_to_cam must be 9 row-major floats")
        kwargs["imu_to_cam"] = np.array(rot, dtype=np.float64).reshape(3, 3)
    return Intrinsics(**kwargs)


def load_frame_meta(path) -> FrameMeta:
    with open(path, "rb") as f:
        return parse_frame_meta(f.read())


def load_intrinsics(path) -> Intrinsics:
    with open(path, "rb") as f:
        return parse_intrinsics(f.read())
