"""Quaternion kinematics driven by gyroscope rates.

Quaternions are Hamilton convention, scalar-first (w, x, y, z), with body
rates applied on the right: dq/dt = 1/2 q (0, omega). Integration is fixed
step RK4 with per-step renormalization; steps are additionally split at gyro
sample times so the piecewise-linear rate signal is smooth inside every step.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import InvalidStepError, OutOfRangeError
from .imu_io import GyroTrack

DEFAULT_STEP = 1e-4  # seconds


def quat_mul(a, b) -> np.ndarray:
    """Hamilton product a (x) b."""
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return np.array(
        [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ]
    )


def quat_conj(q) -> np.ndarray:
    w, x, y, z = q
    return np.array([w, -x, -y, -z])


def quat_normalize(q) -> np.ndarray:
    q = np.asarray(q, dtype=np.float64)
    return q / math.sqrt(float(q @ q))


def quat_from_axis_angle(axis, angle: float) -> np.ndarray:
    axis = np.asarray(axis, dtype=np.float64)
    axis = axis / np.linalg.norm(axis)
    half = 0.5 * angle
    s = math.sin(half)
    return np.array([math.cos(half), s * axis[0], s * axis[1], s * axis[2]])


def quat_to_matrix(q) -> np.ndarray:
    """Direction cosine matrix of a unit quaternion (active rotation)."""
    w, x, y, z = q
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


def quats_to_matrices(qs: np.ndarray) -> np.ndarray:
    """Vectorized quat_to_matrix for an (M, 4) array, returns (M, 3, 3)."""
    qs = np.asarray(qs, dtype=np.float64)
    w, x, y, z = qs[:, 0], qs[:, 1], qs[:, 2], qs[:, 3]
    m = np.empty((qs.shape[0], 3, 3))
    m[:, 0, 0] = 1 - 2 * (y * y + z * z)
    m[:, 0, 1] = 2 * (x * y - w * z)
    m[:, 0, 2] = 2 * (x * z + w * y)
    m[:, 1, 0] = 2 * (x * y + w * z)
    m[:, 1, 1] = 1 - 2 * (x * x + z * z)
    m[:, 1, 2] = 2 * (y * z - w * x)
    m[:, 2, 0] = 2 * (x * z - w * y)
    m[:, 2, 1] = 2 * (y * z + w * x)
    m[:, 2, 2] = 1 - 2 * (x * x + y * y)
    return m


def _check_window(track: GyroTrack, t1: float, t2: float, h: float) -> None:
    if h <= 0 or not math.isfinite(h):
        raise InvalidStepError(f"step must be > 0, got {h}")
    if t2 < t1:
        raise OutOfRangeError(f"window end {t2} before start {t1}")
    if t1 < track.t_start or t2 > track.t_end:
        raise OutOfRangeError(
            f"window [{t1}, {t2}] outside track span "
            f"[{track.t_start}, {track.t_end}]"
        )


def _build_grid(track: GyroTrack, times: np.ndarray, h: float):
    """Step boundaries covering [times[0], times[-1]].

    Boundaries land exactly on every requested time and every gyro sample
    time in between; segments are subdivided into uniform steps <= h.
    Returns (boundaries, snapshot index per requested time).
    """
    ts = track.t
    bounds = [times[0]]
    snap = [0]
    for a, b in zip(times[:-1], times[1:]):
        lo = int(np.searchsorted(ts, a, side="right"))
        hi = int(np.searchsorted(ts, b, side="left"))
        prev = a
        for knot in [*ts[lo:hi], b]:
            seg = knot - prev
            if seg <= 0:
                continue
            n = max(1, math.ceil(seg / h - 1e-12))
            step = seg / n
            for k in range(1, n):
                bounds.append(prev + step * k)
            bounds.append(knot)
            prev = knot
        snap.append(len(bounds) - 1)
    return np.asarray(bounds), snap


def integrate_to_times(track: GyroTrack, times, h: float = DEFAULT_STEP) -> np.ndarray:
    """Orientation quaternions at the given times, identity at times[0].

    `times` must be strictly increasing and inside the track span. The whole
    window is integrated once; intermediate quaternions are snapshotted, so
    the cost is one pass regardless of how many times are requested.
    """
    times = np.asarray(times, dtype=np.float64)
    if times.size == 0:
        return np.empty((0, 4))
    if times.size > 1 and not np.all(np.diff(times) > 0):
        raise OutOfRangeError("requested times must be strictly increasing")
    _check_window(track, float(times[0]), float(times[-1]), h)

    out = np.empty((times.size, 4))
    out[0] = (1.0, 0.0, 0.0, 0.0)
    if times.size == 1:
        return out

    bounds, snap = _build_grid(track, times, h)
    mids = 0.5 * (bounds[:-1] + bounds[1:])
    wx_b, wy_b, wz_b = (np.interp(bounds, track.t, track.omega[:, k]) for k in range(3))
    wx_m, wy_m, wz_m = (np.interp(mids, track.t, track.omega[:, k]) for k in range(3))
    # list indexing is measurably faster than ndarray scalar access here
    wx_b, wy_b, wz_b = wx_b.tolist(), wy_b.tolist(), wz_b.tolist()
    wx_m, wy_m, wz_m = wx_m.tolist(), wy_m.tolist(), wz_m.tolist()
    bl = bounds.tolist()

    qw, qx, qy, qz = 1.0, 0.0, 0.0, 0.0
    nxt = 1
    snap_at = snap[nxt]
    for i in range(len(bl) - 1):
        dt = bl[i + 1] - bl[i]

        a, b, c = wx_b[i], wy_b[i], wz_b[i]
        k1w = -0.5 * (qx * a + qy * b + qz * c)
        k1x = 0.5 * (qw * a + qy * c - qz * b)
        k1y = 0.5 * (qw * b + qz * a - qx * c)
        k1z = 0.5 * (qw * c + qx * b - qy * a)

        hh = 0.5 * dt
        a, b, c = wx_m[i], wy_m[i], wz_m[i]
        tw, tx, ty, tz = qw + hh * k1w, qx + hh * k1x, qy + hh * k1y, qz + hh * k1z
        k2w = -0.5 * (tx * a + ty * b + tz * c)
        k2x = 0.5 * (tw * a + ty * c - tz * b)
        k2y = 0.5 * (tw * b + tz * a - tx * c)
        k2z = 0.5 * (tw * c + tx * b - ty * a)

        tw, tx, ty, tz = qw + hh * k2w, qx + hh * k2x, qy + hh * k2y, qz + hh * k2z
        k3w = -0.5 * (tx * a + ty * b + tz * c)
        k3x = 0.5 * (tw * a + ty * c - tz * b)
        k3y = 0.5 * (tw * b + tz * a - tx * c)
        k3z = 0.5 * (tw * c + tx * b - ty * a)

        a, b, c = wx_b[i + 1], wy_b[i + 1], wz_b[i + 1]
        tw, tx, ty, tz = qw + dt * k3w, qx + dt * k3x, qy + dt * k3y, qz + dt * k3z
        k4w = -0.5 * (tx * a + ty * b + tz * c)
        k4x = 0.5 * (tw * a + ty * c - tz * b)
        k4y = 0.5 * (tw * b + tz * a - tx * c)
        k4z = 0.5 * (tw * c + tx * b - ty * a)

        sixth = dt / 6.0
        qw += sixth * (k1w + 2 * (k2w + k3w) + k4w)
        qx += sixth * (k1x + 2 * (k2x + k3x) + k4x)
        qy += sixth * (k1y + 2 * (k2y + k3y) + k4y)
        qz += sixth * (k1z + 2 * (k2z + k3z) + k4z)
        inv = 1.0 / math.sqrt(qw * qw + qx * qx + qy * qy + qz * qz)
        qw *= inv
        qx *= inv
        qy *= inv
        qz *= inv

        if i + 1 == snap_at:
            out[nxt] = (qw, qx, qy, qz)
            nxt += 1
            if nxt == times.size:
                break
            snap_at = snap[nxt]
    return out


def integrate_rotation(
    track: GyroTrack, t1: float, t2: float, h: float = DEFAULT_STEP
) -> np.ndarray:
    """Solve dq/dt = 1/2 q (0, omega(t)) from q(t1) = identity to t2."""
    _check_window(track, t1, t2, h)
    if t2 == t1:
        return np.array([1.0, 0.0, 0.0, 0.0])
    return integrate_to_times(track, np.array([t1, t2]), h)[1]
