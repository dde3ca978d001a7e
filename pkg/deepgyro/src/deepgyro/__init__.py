"""Toy gyro-conditioned deblurring network over gyroblur datasets."""

from .data import ManifestDataset
from .infer import infer, load_checkpoint, restore_array
from .io import load_png, read_blf, save_png
from .model import FIELD_SCALE, DeblurNet, NetConfig, build_network, parameter_count
from .train import TrainConfig, train

__version__ = "0.1.0"

__all__ = [
    "FIELD_SCALE",
    "DeblurNet",
    "ManifestDataset",
    "NetConfig",
    "TrainConfig",
    "build_network",
    "infer",
    "load_checkpoint",
    "load_png",
    "parameter_count",
    "read_blf",
    "restore_array",
    "save_png",
    "train",
]
