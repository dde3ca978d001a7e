"""Manifest-driven dataset of (blurred [+ noisy field]) -> sharp pairs.

The network always trains against the *noisy* field, mirroring deployment
where only an IMU-derived estimate exists. Blind configurations (3 input
channels) never touch the BLF files at all.
"""

from __future__ import annotations

import json
import os

import numpy as np
import torch
from torch.utils.data import Dataset

from .errors import ManifestNotFoundError, ShapeMismatchError
from .io import load_png, read_blf
from .model import FIELD_SCALE


class ManifestDataset(Dataset):
    """`crop` cuts aligned random patches (seeded per epoch via set_epoch);
    None serves full frames."""

    def __init__(self, manifest_path, in_channels: int = 5, crop: int | None = None, seed: int = 0):
        if not os.path.exists(manifest_path):
            raise ManifestNotFoundError(str(manifest_path))
        self.root = os.path.dirname(os.path.abspath(manifest_path))
        with open(manifest_path) as f:
            self.records = [json.loads(line) for line in f if line.strip()]
        self.in_channels = in_channels
        self.crop = crop
        self.seed = seed
        self.epoch = 0

    def __len__(self) -> int:
        return len(self.records)

    def set_epoch(self, epoch: int) -> None:
        self.epoch = epoch

    def _path(self, name: str) -> str:
        return os.path.join(self.root, name)

    def __getitem__(self, idx: int) -> tuple[torch.Tensor, torch.Tensor]:
        rec = self.records[idx]
        blurred = load_png(self._path(rec["blurred"]))
        sharp = load_png(self._path(rec["sharp"]))
        planes = [blurred[:, :, c] for c in range(3)]
        if self.in_channels == 5:
            u, v = read_blf(self._path(rec["noisy_field"]))
            if u.shape != blurred.shape[:2]:
                raise ShapeMismatchError(
                    f"field {u.shape} vs image {blurred.shape[:2]} (sample {rec['index']})"
                )
            planes += [u / FIELD_SCALE, v / FIELD_SCALE]
        x = np.stack(planes, axis=0)
        y = sharp.transpose(2, 0, 1)

        if self.crop is not None:
            h, w = y.shape[1:]
            if h < self.crop or w < self.crop:
                raise ShapeMismatchError(
                    f"sample {rec['index']} ({h}x{w}) smaller than crop {self.crop}"
                )
            rng = np.random.default_rng((self.seed, self.epoch, idx))
            top = int(rng.integers(0, h - self.crop + 1))
            left = int(rng.integers(0, w - self.crop + 1))
            sl = np.s_[:, top : top + self.crop, left : left + self.crop]
            x, y = x[sl], y[sl]

        return torch.from_numpy(np.ascontiguousarray(x)), torch.from_numpy(
            np.ascontiguousarray(y)
        )
