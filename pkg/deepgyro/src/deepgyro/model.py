"""Encoder-decoder deblurring network.

Input is the blurred RGB image, optionally stacked with the two blur-field
planes (5 channels total); output is the restored RGB image. All convolutions
are 3x3 except the 1x1 output head; downsampling is 2x2 max pooling with
stride 2; each up-convolution is nearest upsampling followed by a 2x2
convolution that halves the feature channels, after which the matching
encoder features are concatenated back in. Fully convolutional, so any input
whose sides are multiples of 2**depth works.

In the gyro-conditioned variant the 1x1 head's prediction is blended with
the input per pixel, weighted by the measured blur magnitude: the gate is
zero below GATE_ZERO_PX (blur under a quarter pixel is below the synthesis
kernel's own resolution) and ramps to one at GATE_FULL_PX. Where the field
reports no motion the output is exactly the input, so sharp regions pass
through untouched no matter how little a toy run trained; where it reports
motion the head owns the pixel. The blind variant has no field to gate on
and adds the head to the input as a plain residual.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import torch
from torch import nn

from .errors import InvalidConfigError

FIELD_SCALE = 100.0  # blur planes are divided by this before entering the net
GATE_ZERO_PX = 0.25  # measured blur below this is treated as no motion
GATE_FULL_PX = 1.0  # residual gate saturates at this blur magnitude


@dataclass(frozen=True)
class NetConfig:
    in_channels: int = 5  # 5 = RGB + U + V; 3 = image only (blind variant)
    depth: int = 4
    base_channels: int = 32
    loss: str = "L1"
    residual: bool = True

    def __post_init__(self):
        if self.in_channels not in (3, 5):
            raise InvalidConfigError("in_channels must be 3 or 5")
        if self.depth < 1:
            raise InvalidConfigError("depth must be >= 1")
        if self.base_channels < 1:
            raise InvalidConfigError("base_channels must be >= 1")
        if self.loss not in ("L1", "L2"):
            raise InvalidConfigError("loss must be 'L1' or 'L2'")

    def to_dict(self) -> dict:
        return asdict(self)


def _double_conv(c_in: int, c_out: int) -> nn.Sequential:
    return nn.Sequential(
        nn.Conv2d(c_in, c_out, 3, padding=1),
        nn.ReLU(inplace=True),
        nn.Conv2d(c_out, c_out, 3, padding=1),
        nn.ReLU(inplace=True),
    )


class DeblurNet(nn.Module):
    def __init__(self, cfg: NetConfig):
        super().__init__()
        self.cfg = cfg
        widths = [cfg.base_channels * 2**i for i in range(cfg.depth)]

        self.encoders = nn.ModuleList()
        c_prev = cfg.in_channels
        for w in widths:
            self.encoders.append(_double_conv(c_prev, w))
            c_prev = w
        self.pool = nn.MaxPool2d(2, stride=2)
        self.bottleneck = _double_conv(widths[-1], widths[-1] * 2)

        self.upconvs = nn.ModuleList()
        self.decoders = nn.ModuleList()
        c_prev = widths[-1] * 2
        for w in reversed(widths):
            self.upconvs.append(
                nn.Sequential(
                    nn.Upsample(scale_factor=2, mode="nearest"),
                    nn.Conv2d(c_prev, w, 2, padding="same"),
                )
            )
            self.decoders.append(_double_conv(2 * w, w))
            c_prev = w
        # the head also sees the raw RGB planes, so reproducing unblurred
        # content is a one-weight copy rather than something the decoder
        # must learn to reconstruct
        self.head = nn.Conv2d(widths[0] + 3, 3, 1)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        skips = []
        h = x
        for enc in self.encoders:
            h = enc(h)
            skips.append(h)
            h = self.pool(h)
        h = self.bottleneck(h)
        for up, dec, skip in zip(self.upconvs, self.decoders, reversed(skips)):
            h = up(h)
            h = dec(torch.cat([h, skip], dim=1))
        rgb = x[:, :3]
        out = self.head(torch.cat([h, rgb], dim=1))
        if self.cfg.residual:
            if self.cfg.in_channels == 5:
                blur_px = torch.hypot(x[:, 3], x[:, 4]) * FIELD_SCALE
                gate = torch.clamp(
                    (blur_px - GATE_ZERO_PX) / (GATE_FULL_PX - GATE_ZERO_PX), 0.0, 1.0
                ).unsqueeze(1)
                out = (1.0 - gate) * rgb + gate * out
            else:
                out = rgb + out
        return out


def build_network(cfg: NetConfig) -> DeblurNet:
    return DeblurNet(cfg)


def make_loss(cfg: NetConfig) -> nn.Module:
    return nn.L1Loss() if cfg.loss == "L1" else nn.MSELoss()


def parameter_count(model: nn.Module) -> int:
    return sum(p.numel() for p in model.parameters())
