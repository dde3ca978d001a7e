"""Non-blind spatially-variant deblurring given a blur field.

Richardson-Lucy needs only the forward blur operator A and its transpose,
which makes it a natural baseline for per-pixel line kernels: under an exact
adjoint, the Poisson data term is non-increasing per iteration, which the
test suite uses as a built-in regression check. No regularizer is applied;
ringing under field error is expected behaviour for this baseline.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .blurfield import BlurField
from .errors import DimensionMismatchError, InvalidItersError
from .images import channels_of

EPS = 1e-6


def _check_dims(img: np.ndarray, fld: BlurField) -> None:
    channels_of(img)
    if img.shape[:2] != fld.shape:
        raise DimensionMismatchError(f"image {img.shape[:2]} vs field {fld.shape}")


def adjoint_apply(img: np.ndarray, fld: BlurField) -> np.ndarray:
    """Exact transpose of apply_blur_field: scatter each pixel's taps back."""
    _check_dims(img, fld)
    u = fld.u.astype(np.float64)
    v = fld.v.astype(np.float64)
    out = np.empty(img.shape, np.float32)
    if img.ndim == 2:
        planes = [(img, out)]
    else:
        planes = [(img[:, :, c], out[:, :, c]) for c in range(img.shape[2])]
    for src, dst in planes:
        buf = np.zeros(fld.shape, np.float64)
        _kernels.blur_adjoint(src.astype(np.float64), u, v, buf)
        dst[:] = buf.astype(np.float32)
    return out


def _forward64(plane: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    out = np.empty(plane.shape, np.float64)
    _kernels.blur_forward(plane, u, v, out)
    return out


def _adjoint64(plane: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    out = np.zeros(plane.shape, np.float64)
    _kernels.blur_adjoint(plane, u, v, out)
    return out


def richardson_lucy_sv(
    blurred: np.ndarray, fld: BlurField, iters: int = 50
) -> np.ndarray:
    """Multiplicative RL updates x <- x * A^T(b / Ax) / A^T 1, per channel.

    Initialized at the blurred input; divisions are guarded with eps = 1e-6;
    iterates are clamped to [0, 4] and the result to [0, 1].
    """
    if iters < 1:
        raise InvalidItersError(f"iters must be >= 1, got {iters}")
    _check_dims(blurred, fld)
    u = fld.u.astype(np.float64)
    v = fld.v.astype(np.float64)
    norm = _adjoint64(np.ones(fld.shape, np.float64), u, v)

    out = np.empty(blurred.shape, np.float32)
    planes = (
        [(blurred, out)]
        if blurred.ndim == 2
        else [(blurred[:, :, c], out[:, :, c]) for c in range(blurred.shape[2])]
    )
    for src, dst in planes:
        b = src.astype(np.float64)
        x = b.copy()
        for _ in range(iters):
            ratio = b / (_forward64(x, u, v) + EPS)
            x = x * _adjoint64(ratio, u, v) / (norm + EPS)
            np.clip(x, 0.0, 4.0, out=x)
        dst[:] = np.clip(x, 0.0, 1.0).astype(np.float32)
    return out


def poisson_data_term(blurred: np.ndarray, x: np.ndarray, fld: BlurField) -> float:
    """-sum(b log(Ax) - Ax); the quantity RL drives downhill (diagnostics)."""
    u = fld.u.astype(np.float64)
    v = fld.v.astype(np.float64)
    total = 0.0
    pairs = (
        [(blurred, x)]
        if blurred.ndim == 2
        else [(blurred[:, :, c], x[:, :, c]) for c in range(blurred.shape[2])]
    )
    for b, xc in pairs:
        ax = _forward64(xc.astype(np.float64), u, v)
        total -= float(np.sum(b * np.log(ax + EPS) - ax))
    return total
