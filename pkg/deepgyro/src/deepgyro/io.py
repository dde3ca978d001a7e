"""Byte-level readers/writers for the dataset interchange formats.

deepgyro consumes the blur-synthesis pipeline purely through its files:
16-bit PNGs, BLF blur fields (magic `BLF1`, u32 LE width/height, float32 LE
U plane then V plane) and the JSON-lines manifest.
"""

from __future__ import annotations

import struct

import cv2
import numpy as np

from .errors import BlfFormatError

BLF_MAGIC = b"BLF1"


def read_blf(path) -> tuple[np.ndarray, np.ndarray]:
    """Return the (U, V) planes of a blur field, float32, shape (H, W)."""
    with open(path, "rb") as f:
        raw = f.read()
    if len(raw) < 12:
        raise BlfFormatError(f"{path}: too short for a BLF header")
    magic, width, height = struct.unpack_from("<4sII", raw, 0)
    if magic != BLF_MAGIC:
        raise BlfFormatError(f"{path}: bad magic {magic!r}")
    n = width * height
    if len(raw) != 12 + 8 * n:
        raise BlfFormatError(f"{path}: payload does not match {width}x{height}")
    data = np.frombuffer(raw, dtype="<f4", offset=12)
    return (
        data[:n].reshape(height, width).astype(np.float32),
        data[n:].reshape(height, width).astype(np.float32),
    )


def load_png(path) -> np.ndarray:
    """PNG to float32 [0, 1], RGB (H, W, 3) or grayscale promoted to RGB."""
    arr = cv2.imread(str(path), cv2.IMREAD_UNCHANGED)
    if arr is None:
        raise FileNotFoundError(f"could not read image: {path}")
    if arr.ndim == 2:
        arr = arr[:, :, None].repeat(3, axis=2)
    if arr.shape[2] == 4:
        arr = arr[:, :, :3]
    arr = cv2.cvtColor(arr, cv2.COLOR_BGR2RGB)
    scale = 65535.0 if arr.dtype == np.uint16 else 255.0
    return arr.astype(np.float32) / scale


def save_png(path, img: np.ndarray) -> None:
    """Float [0, 1] RGB to a 16-bit PNG."""
    arr = np.round(np.clip(img, 0.0, 1.0) * 65535.0).astype(np.uint16)
    cv2.imwrite(str(path), cv2.cvtColor(arr, cv2.COLOR_RGB2BGR))
