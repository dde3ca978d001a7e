"""Per-pixel blur vectors induced by camera rotation.

A blur field holds, for every pixel, the displacement (u, v) of a scene
point's projection between the start and end of that pixel row's exposure.
Rolling shutter staggers the rows: row y starts at t_f + t_r * y / N and
ends t_e later, so each row gets its own start/end rotation pair and hence
its own homography. Vectors are canonicalized to u >= 0 since opposite
displacements produce the same blur.

Orientations are expressed camera-from-world, which makes the per-row
relative map independent of where integration starts; only the rotation
accumulated between the row's own exposure start and end matters.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np

from .errors import (
    BlfFormatError,
    DimensionMismatchError,
    InvalidValueError,
    PointAtInfinityError,
    RowOutOfRangeError,
    SingularResultError,
)
from .imu_io import FrameMeta, GyroTrack, Intrinsics
from .rotation import DEFAULT_STEP, integrate_to_times, quats_to_matrices

BLF_MAGIC = b"BLF1"


@dataclass(frozen=True)
class PlaneParams:
    """Constant-depth scene plane: unit normal, depth and camera translation."""

    n: np.ndarray
    d: float
    trans: np.ndarray

    def __post_init__(self):
        n = np.ascontiguousarray(self.n, dtype=np.float64)
        tr = np.ascontiguousarray(self.trans, dtype=np.float64)
        if n.shape != (3,) or tr.shape != (3,):
            raise InvalidValueError("n and trans must be 3-vectors")
        if abs(np.linalg.norm(n) - 1.0) > 1e-9:
            raise InvalidValueError("scene normal must be unit length")
        if not self.d > 0:
            raise InvalidValueError("scene depth must be positive")
        n.setflags(write=False)
        tr.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "trans", tr)


@dataclass
class BlurField:
    """Two planes of per-pixel blur components, in pixels.

    Planes are float32 by default; float64 planes are accepted so numerical
    checks can compare against the unquantized math (BLF files are always
    written as float32).
    """

    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        dtype = np.float64 if np.asarray(self.u).dtype == np.float64 else np.float32
        self.u = np.ascontiguousarray(self.u, dtype=dtype)
        self.v = np.ascontiguousarray(self.v, dtype=dtype)
        if self.u.ndim != 2 or self.u.shape != self.v.shape:
            raise DimensionMismatchError("U and V planes must be equal 2-D shapes")

    @property
    def height(self) -> int:
        return self.u.shape[0]

    @property
    def width(self) -> int:
        return self.u.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.u.shape

    def magnitude(self) -> np.ndarray:
        return np.hypot(self.u.astype(np.float64), self.v.astype(np.float64))

    def validate(self) -> None:
        """Check the canonical-form invariants (U >= 0, all finite)."""
        if not (np.all(np.isfinite(self.u)) and np.all(np.isfinite(self.v))):
            raise InvalidValueError("blur field contains non-finite values")
        if np.any(self.u < 0):
            raise InvalidValueError("blur field is not canonical: U has negative values")

    @classmethod
    def zeros(cls, height: int, width: int) -> "BlurField":
        return cls(np.zeros((height, width), np.float32), np.zeros((height, width), np.float32))


def _normalize_h(h: np.ndarray) -> np.ndarray:
    det = np.linalg.det(h)
    if abs(det) < 1e-12:
        raise SingularResultError(f"homography is singular (det={det})")
    if h[2, 2] != 0.0:
        h = h / h[2, 2]
    return h


def homography_full(K: Intrinsics, R: np.ndarray, plane: PlaneParams) -> np.ndarray:
    """Planar-scene homography K [R - t n^T / d] K^-1 (exposed for tests)."""
    core = np.asarray(R, dtype=np.float64) - np.outer(plane.trans, plane.n) / plane.d
    return _normalize_h(K.K @ core @ K.K_inv)


def homography_rotational(K: Intrinsics, R: np.ndarray) -> np.ndarray:
    """Rotation-only homography K R K^-1 (the deployed path)."""
    return _normalize_h(K.K @ np.asarray(R, dtype=np.float64) @ K.K_inv)


def row_exposure(y: int, meta: FrameMeta) -> tuple[float, float]:
    """Exposure window (t1, t2) of pixel row y under rolling-shutter timing."""
    if y < 0 or y >= meta.rows:
        raise RowOutOfRangeError(f"row {y} outside [0, {meta.rows})")
    t1 = meta.t_f + meta.t_r * y / meta.rows
    return t1, t1 + meta.t_e


def map_point(K: Intrinsics, R1: np.ndarray, R2: np.ndarray, x) -> np.ndarray:
    """Map a pixel through the relative rotation K R2 R1^T K^-1.

    `x` may be a homogeneous 3-vector or a pixel 2-vector; the result is a
    dehomogenized pixel 2-vector.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape == (2,):
        x = np.array([x[0], x[1], 1.0])
    if not np.all(np.isfinite(x)):
        raise InvalidValueError("point must be finite")
    h = K.K @ np.asarray(R2) @ np.asarray(R1).T @ K.K_inv
    p = h @ x
    if abs(p[2]) < 1e-12:
        raise PointAtInfinityError("mapped point has vanishing third coordinate")
    return p[:2] / p[2]


def canonicalize(u: float, v: float) -> tuple[float, float]:
    """Resolve the (u, v) ~ (-u, -v) sign ambiguity: u > 0, ties to v >= 0."""
    if u < 0 or (u == 0 and v < 0):
        return -u, -v
    return u, v


def canonicalize_planes(u: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized canonicalize over whole U/V planes."""
    flip = (u < 0) | ((u == 0) & (v < 0))
    sign = np.where(flip, -1.0, 1.0)
    return u * sign + 0.0, v * sign + 0.0  # +0.0 normalizes -0.0


def camera_orientations(
    track: GyroTrack, times, h: float = DEFAULT_STEP
) -> np.ndarray:
    """Camera-from-world rotation matrices at the given (sorted) times.

    The first requested time serves as the world anchor; relative products
    R(tb) R(ta)^T between any two returned matrices do not depend on it.
    """
    qs = integrate_to_times(track, times, h)
    return quats_to_matrices(qs).transpose(0, 2, 1)


def compute_blur_field(
    track: GyroTrack,
    meta: FrameMeta,
    K: Intrinsics,
    h: float = DEFAULT_STEP,
    dtype=np.float32,
) -> BlurField:
    """Blur vectors for every pixel of a frame.

    Per row y the exposure window comes from `row_exposure`; the row's map is
    the relative rotation homography between window start and end, applied to
    pixel centers (col + 0.5, row + 0.5). All 2N orientations are obtained
    from a single integration pass over the frame's time span.
    """
    eff_track = track.rotated(K.imu_to_cam) if K.has_imu_rotation else track
    rows, cols = meta.rows, meta.cols

    t1s = meta.t_f + meta.t_r * np.arange(rows, dtype=np.float64) / meta.rows
    t2s = t1s + meta.t_e
    times, inverse = np.unique(np.concatenate([t1s, t2s]), return_inverse=True)
    W = camera_orientations(eff_track, times, h)
    W1 = W[inverse[:rows]]
    W2 = W[inverse[rows:]]
    rel = np.einsum("nij,nkj->nik", W2, W1)  # per-row relative rotation

    # Work in normalized camera coordinates rather than conjugating by K:
    # the displacement is then exactly zero wherever the relative rotation
    # is the exact identity (zero-rate tracks give bit-zero fields).
    xs = np.arange(cols, dtype=np.float64) + 0.5
    ys = np.arange(rows, dtype=np.float64) + 0.5
    nx = (xs - K.cx) / K.fx  # (cols,)
    ny = ((ys - K.cy) / K.fy)[:, None]  # (rows, 1)
    r = {(i, j): rel[:, i, j][:, None] for i in range(3) for j in range(3)}
    px = r[0, 0] * nx + r[0, 1] * ny + r[0, 2]
    py = r[1, 0] * nx + r[1, 1] * ny + r[1, 2]
    pw = r[2, 0] * nx + r[2, 1] * ny + r[2, 2]
    if np.min(np.abs(pw)) < 1e-12:
        raise PointAtInfinityError("blur field maps a pixel to infinity")
    u = K.fx * (px / pw - nx)
    v = K.fy * (py / pw - ny)
    u, v = canonicalize_planes(u, v)
    return BlurField(u.astype(dtype), v.astype(dtype))


# --- BLF binary format ---------------------------------------------------------

def write_blf(path, field: BlurField) -> None:
    """Write a blur field: magic 'BLF1', u32 LE width/height, f32 LE U then V."""
    header = struct.pack("<4sII", BLF_MAGIC, field.width, field.height)
    with open(path, "wb") as f:
        f.write(header)
        f.write(np.ascontiguousarray(field.u, dtype="<f4").tobytes())
        f.write(np.ascontiguousarray(field.v, dtype="<f4").tobytes())


def read_blf(path) -> BlurField:
    with open(path, "rb") as f:
        raw = f.read()
    if len(raw) < 12:
        raise BlfFormatError("file too short for BLF header")
    magic, width, height = struct.unpack_from("<4sII", raw, 0)
    if magic != BLF_MAGIC:
        raise BlfFormatError(f"bad magic {magic!r}, expected {BLF_MAGIC!r}")
    n = width * height
    expected = 12 + 8 * n
    if len(raw) != expected:
        raise BlfFormatError(f"expected {expected} bytes for {width}x{height}, got {len(raw)}")
    data = np.frombuffer(raw, dtype="<f4", offset=12)
    u = data[:n].reshape(height, width).astype(np.float32)
    v = data[n:].reshape(height, width).astype(np.float32)
    return BlurField(u, v)


# --- visualization ---------------------------------------------------------------

def field_to_color(field: BlurField, max_magnitude: float | None = None) -> np.ndarray:
    """Render a field as an RGB uint8 image: hue = direction, saturation = magnitude.

    Magnitude is normalized to `max_magnitude` (default: the field max); a
    zero field renders white.
    """
    u = field.u.astype(np.float64)
    v = field.v.astype(np.float64)
    mag = np.hypot(u, v)
    scale = float(np.max(mag)) if max_magnitude is None else float(max_magnitude)
    sat = np.clip(mag / scale, 0.0, 1.0) if scale > 0 else np.zeros_like(mag)
    hue = (np.arctan2(v, u) / (2.0 * math.pi)) % 1.0
    return _hsv_to_rgb_u8(hue, sat, np.ones_like(sat))


def _hsv_to_rgb_u8(h: np.ndarray, s: np.ndarray, v: np.ndarray) -> np.ndarray:
    i = np.floor(h * 6.0).astype(int) % 6
    f = h * 6.0 - np.floor(h * 6.0)
    p = v * (1.0 - s)
    q = v * (1.0 - f * s)
    t = v * (1.0 - (1.0 - f) * s)
    r = np.choose(i, [v, q, p, p, t, v])
    g = np.choose(i, [t, v, v, q, p, p])
    b = np.choose(i, [p, p, t, v, v, q])
    rgb = np.stack([r, g, b], axis=-1)
    return np.clip(np.round(rgb * 255.0), 0, 255).astype(np.uint8)
