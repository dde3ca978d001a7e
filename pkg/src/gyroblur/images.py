"""PNG loading/saving and the float image conventions used package-wide.

Images are numpy float32 arrays in [0, 1], shape (H, W) for grayscale or
(H, W, 3) RGB. PNG values are treated as linear by default; sRGB decoding is
opt-in since the synthesis pipeline is gamma-agnostic.
"""

from __future__ import annotations

import os

import cv2
import numpy as np

from .errors import InvalidValueError, IoError


def to_float_image(arr: np.ndarray, srgb_decode: bool = False) -> np.ndarray:
    """Normalize an 8/16-bit (or float) array to float32 in [0, 1]."""
    if arr.dtype == np.uint8:
        img = arr.astype(np.float32) / 255.0
    elif arr.dtype == np.uint16:
        img = arr.astype(np.float32) / 65535.0
    elif np.issubdtype(arr.dtype, np.floating):
        img = np.clip(arr.astype(np.float32), 0.0, 1.0)
    else:
        raise InvalidValueError(f"unsupported image dtype {arr.dtype}")
    if srgb_decode:
        img = srgb_to_linear(img)
    return img


def srgb_to_linear(img: np.ndarray) -> np.ndarray:
    out = np.where(img <= 0.04045, img / 12.92, ((img + 0.055) / 1.055) ** 2.4)
    return out.astype(np.float32)


def load_image(path, srgb_decode: bool = False) -> np.ndarray:
    """Read a PNG (8/16-bit, gray or RGB) into float32 [0, 1]."""
    if not os.path.exists(path):
        raise IoError(f"image not found: {path}")
    arr = cv2.imread(str(path), cv2.IMREAD_UNCHANGED)
    if arr is None:
        raise IoError(f"could not decode image: {path}")
    if arr.ndim == 3:
        if arr.shape[2] == 4:
            arr = arr[:, :, :3]
        arr = cv2.cvtColor(arr, cv2.COLOR_BGR2RGB)
    return to_float_image(arr, srgb_decode=srgb_decode)


def save_image(path, img: np.ndarray, bit_depth: int = 16) -> None:
    """Write a float [0, 1] image as an 8- or 16-bit PNG."""
    img = np.clip(np.asarray(img, dtype=np.float64), 0.0, 1.0)
    if bit_depth == 16:
        arr = np.round(img * 65535.0).astype(np.uint16)
    elif bit_depth == 8:
        arr = np.round(img * 255.0).astype(np.uint8)
    else:
        raise InvalidValueError(f"bit_depth must be 8 or 16, got {bit_depth}")
    if arr.ndim == 3:
        arr = cv2.cvtColor(arr, cv2.COLOR_RGB2BGR)
    if not cv2.imwrite(str(path), arr):
        raise IoError(f"could not write image: {path}")


def save_rgb_u8(path, arr: np.ndarray) -> None:
    """Write an already-quantized uint8 RGB array (visualizations)."""
    if not cv2.imwrite(str(path), cv2.cvtColor(arr, cv2.COLOR_RGB2BGR)):
        raise IoError(f"could not write image: {path}")


def channels_of(img: np.ndarray) -> int:
    if img.ndim == 2:
        return 1
    if img.ndim == 3 and img.shape[2] in (1, 3):
        return img.shape[2]
    raise InvalidValueError(f"image must be (H, W) or (H, W, 1|3), got {img.shape}")


def iter_planes(img: np.ndarray):
    """Yield each channel as a 2-D view."""
    if img.ndim == 2:
        yield img
    else:
        for c in range(img.shape[2]):
            yield img[:, :, c]
