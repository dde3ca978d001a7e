"""Inference: arbitrary image sizes via replicate padding to the network's
stride, cropped back afterwards."""

from __future__ import annotations

import numpy as np
import torch
import torch.nn.functional as F

from .errors import CheckpointMismatchError, MissingFieldError, ShapeMismatchError
from .io import load_png, read_blf, save_png
from .model import FIELD_SCALE, NetConfig, build_network


def load_checkpoint(path) -> tuple[torch.nn.Module, NetConfig]:
    try:
        payload = torch.load(path, map_location="cpu", weights_only=True)
    except Exception as e:
        raise CheckpointMismatchError(f"cannot load checkpoint {path}: {e}") from None
    if "net_cfg" not in payload or "model_state" not in payload:
        raise CheckpointMismatchError(f"{path} is not a deepgyro checkpoint")
    cfg = NetConfig(**payload["net_cfg"])
    model = build_network(cfg)
    try:
        model.load_state_dict(payload["model_state"])
    except RuntimeError as e:
        raise CheckpointMismatchError(str(e)) from None
    model.eval()
    return model, cfg


def restore_array(
    model: torch.nn.Module, cfg: NetConfig, blurred: np.ndarray, field=None
) -> np.ndarray:
    """Run the network on a float [0, 1] RGB array (+ optional (U, V))."""
    planes = [blurred[:, :, c] for c in range(3)]
    if cfg.in_channels == 5:
        if field is None:
            raise MissingFieldError("this checkpoint needs a blur field input")
        u, v = field
        if u.shape != blurred.shape[:2]:
            raise ShapeMismatchError(f"field {u.shape} vs image {blurred.shape[:2]}")
        planes += [u / FIELD_SCALE, v / FIELD_SCALE]
    x = torch.from_numpy(np.stack(planes, axis=0)).unsqueeze(0)

    stride = 2 ** cfg.depth
    h, w = x.shape[2:]
    pad_h = (stride - h % stride) % stride
    pad_w = (stride - w % stride) % stride
    if pad_h or pad_w:
        x = F.pad(x, (0, pad_w, 0, pad_h), mode="replicate")
    with torch.no_grad():
        out = model(x)
    out = out[0, :, :h, :w].numpy().transpose(1, 2, 0)
    return np.clip(out, 0.0, 1.0).astype(np.float32)


def infer(image_path, field_path, checkpoint_path, out_path) -> np.ndarray:
    """File-level wrapper: PNG (+ optional BLF) -> deblurred 16-bit PNG."""
    model, cfg = load_checkpoint(checkpoint_path)
    blurred = load_png(image_path)
    field = read_blf(field_path) if field_path is not None else None
    restored = restore_array(model, cfg, blurred, field)
    save_png(out_path, restored)
    return restored
