"""Training loop: Adam, learning rate halved every `halve_every` epochs.

Full-scale reference settings are lr 5e-5 over 40 epochs on 100k images; the
toy defaults (lr 1e-3, 5 epochs) are what 200-sample desk runs need to move
at all. Checkpoints carry the network config so inference can rebuild and
validate against it; `loss.json` records the per-epoch mean loss curve.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass

import torch
from torch.utils.data import DataLoader

from .data import ManifestDataset
from .errors import InvalidConfigError
from .model import NetConfig, build_network, make_loss


@dataclass(frozen=True)
class TrainConfig:
    lr: float = 1e-3  # full-scale reference: 5e-5
    halve_every: int = 10
    epochs: int = 5  # full-scale reference: 40
    batch_size: int = 4
    crop: int | None = None
    grad_clip: float = 1.0  # small batches at toy rates need this to stay stable
    seed: int = 0

    def __post_init__(self):
        if self.lr <= 0:
            raise InvalidConfigError("lr must be > 0")
        if self.epochs < 1 or self.halve_every < 1 or self.batch_size < 1:
            raise InvalidConfigError("epochs, halve_every and batch_size must be >= 1")


def train(
    manifest_path,
    net_cfg: NetConfig,
    train_cfg: TrainConfig,
    out_dir,
    log=print,
) -> dict:
    """Train on a gyroblur manifest; returns checkpoint/loss-curve paths."""
    os.makedirs(out_dir, exist_ok=True)
    torch.manual_seed(train_cfg.seed)

    dataset = ManifestDataset(
        manifest_path, in_channels=net_cfg.in_channels,
        crop=train_cfg.crop, seed=train_cfg.seed,
    )
    model = build_network(net_cfg)
    criterion = make_loss(net_cfg)
    optimizer = torch.optim.Adam(model.parameters(), lr=train_cfg.lr)

    curve = []
    for epoch in range(train_cfg.epochs):
        if epoch > 0 and epoch % train_cfg.halve_every == 0:
            for group in optimizer.param_groups:
                group["lr"] *= 0.5
        dataset.set_epoch(epoch)
        loader = DataLoader(
            dataset,
            batch_size=train_cfg.batch_size,
            shuffle=True,
            num_workers=0,
            generator=torch.Generator().manual_seed(train_cfg.seed + epoch),
        )
        model.train()
        total, count = 0.0, 0
        for x, y in loader:
            optimizer.zero_grad()
            loss = criterion(model(x), y)
            loss.backward()
            if train_cfg.grad_clip > 0:
                torch.nn.utils.clip_grad_norm_(model.parameters(), train_cfg.grad_clip)
            optimizer.step()
            total += float(loss.detach()) * x.shape[0]
            count += x.shape[0]
        mean_loss = total / max(count, 1)
        curve.append(mean_loss)
        log(f"epoch {epoch + 1}/{train_cfg.epochs}: {net_cfg.loss} loss {mean_loss:.5f}")

    checkpoint_path = os.path.join(out_dir, "checkpoint.pt")
    torch.save(
        {
            "model_state": model.state_dict(),
            "net_cfg": net_cfg.to_dict(),
            "train_cfg": asdict(train_cfg),
            "loss_curve": curve,
        },
        checkpoint_path,
    )
    loss_path = os.path.join(out_dir, "loss.json")
    with open(loss_path, "w") as f:
        json.dump({"loss": curve}, f)
    return {"checkpoint": checkpoint_path, "loss_curve": loss_path, "losses": curve}
