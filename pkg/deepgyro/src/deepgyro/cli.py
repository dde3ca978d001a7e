"""deepgyro CLI: train on a gyroblur manifest, run inference on PNG+BLF."""

from __future__ import annotations

import argparse
import json
import sys

from .errors import DeepGyroError
from .infer import infer
from .model import NetConfig
from .train import TrainConfig, train


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="deepgyro", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train on a dataset manifest")
    p.add_argument("--manifest", required=True, help="gyroblur manifest.jsonl")
    p.add_argument("--out", required=True, help="output directory for checkpoint + loss.json")
    p.add_argument("--blind", action="store_true",
                   help="3-channel variant that ignores the blur fields")
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--base-channels", type=int, default=32)
    p.add_argument("--loss", choices=["L1", "L2"], default="L1")
    p.add_argument("--lr", type=float, default=1e-3, help="initial learning rate")
    p.add_argument("--halve-every", type=int, default=10, help="halve lr every N epochs")
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--batch-size", type=int, default=4)
    p.add_argument("--crop", type=int, default=None, help="random crop size for training")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("infer", help="deblur one image with a checkpoint")
    p.add_argument("--image", required=True, help="blurred PNG")
    p.add_argument("--field", default=None, help="BLF blur field (omit for blind models)")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--out", required=True, help="output PNG")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "train":
            net_cfg = NetConfig(
                in_channels=3 if args.blind else 5,
                depth=args.depth,
                base_channels=args.base_channels,
                loss=args.loss,
            )
            train_cfg = TrainConfig(
                lr=args.lr, halve_every=args.halve_every, epochs=args.epochs,
                batch_size=args.batch_size, crop=args.crop, seed=args.seed,
            )
            result = train(args.manifest, net_cfg, train_cfg, args.out)
            print(json.dumps({k: result[k] for k in ("checkpoint", "loss_curve")}))
        else:
            infer(args.image, args.field, args.checkpoint, args.out)
            print(json.dumps({"out": args.out}))
        return 0
    except (DeepGyroError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
