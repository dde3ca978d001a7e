"""Full-reference image quality metrics on [0, 1] float images.

PSNR is computed over all pixels and channels jointly. SSIM follows the
standard Wang et al. setup: 11x11 Gaussian window (sigma 1.5), K1 = 0.01,
K2 = 0.03, dynamic range 1.0, evaluated on luma for RGB inputs and averaged
over the valid (fully-windowed) region.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.signal import convolve2d

from .errors import DimensionMismatchError, TooSmallError

_SSIM_WINDOW = 11
_SSIM_SIGMA = 1.5
_K1 = 0.01
_K2 = 0.03

LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114])  # ITU-R BT.601


def _check_pair(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionMismatchError(f"shape mismatch: {a.shape} vs {b.shape}")


def psnr(a: np.ndarray, b: np.ndarray) -> float:
    """Peak signal-to-noise ratio in dB; +inf for identical images."""
    _check_pair(a, b)
    diff = a.astype(np.float64) - b.astype(np.float64)
    mse = float(np.mean(diff * diff))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(1.0 / mse)


def to_luma(img: np.ndarray) -> np.ndarray:
    if img.ndim == 2:
        return img.astype(np.float64)
    if img.ndim == 3 and img.shape[2] == 1:
        return img[:, :, 0].astype(np.float64)
    return img.astype(np.float64) @ LUMA_WEIGHTS


def _gaussian_window(size: int, sigma: float) -> np.ndarray:
    r = np.arange(size) - (size - 1) / 2.0
    g = np.exp(-(r * r) / (2.0 * sigma * sigma))
    k = np.outer(g, g)
    return k / k.sum()


def ssim(a: np.ndarray, b: np.ndarray) -> float:
    """Mean local structural similarity; 1.0 for identical images."""
    _check_pair(a, b)
    x = to_luma(a)
    y = to_luma(b)
    if min(x.shape) < _SSIM_WINDOW:
        raise TooSmallError(
            f"image {x.shape} smaller than the {_SSIM_WINDOW}x{_SSIM_WINDOW} window"
        )
    win = _gaussian_window(_SSIM_WINDOW, _SSIM_SIGMA)

    mu_x = convolve2d(x, win, mode="valid")
    mu_y = convolve2d(y, win, mode="valid")
    xx = convolve2d(x * x, win, mode="valid")
    yy = convolve2d(y * y, win, mode="valid")
    xy = convolve2d(x * y, win, mode="valid")
    var_x = xx - mu_x * mu_x
    var_y = yy - mu_y * mu_y
    cov = xy - mu_x * mu_y

    c1 = _K1 * _K1
    c2 = _K2 * _K2
    num = (2.0 * mu_x * mu_y + c1) * (2.0 * cov + c2)
    den = (mu_x * mu_x + mu_y * mu_y + c1) * (var_x + var_y + c2)
    return float(np.mean(num / den))
