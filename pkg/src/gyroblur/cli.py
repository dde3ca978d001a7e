"""Command-line entry point: field / synth / gen-dataset / deblur / eval.

JSON results go to stdout, diagnostics to stderr. Exit codes: 0 success,
2 usage, 3 I/O, 4 input format, 5 numeric/domain error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import blurfield, deconv, images, imu_io, metrics, synth
from .errors import DomainError, FormatError, GyroBlurError, IoError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_FORMAT = 4
EXIT_DOMAIN = 5


def _add_gen_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--t-e", type=float, default=0.030, help="exposure time [s]")
    p.add_argument("--t-r-min", type=float, default=0.0, help="readout time range low [s]")
    p.add_argument("--t-r-max", type=float, default=0.030, help="readout time range high [s]")
    p.add_argument("--omega-multiplier", type=float, default=2.0,
                   help="angular rate multiplier before blur computation")
    p.add_argument("--max-blur", type=float, default=100.0, help="blur magnitude cap [px]")
    p.add_argument("--sigma-delay", type=float, default=1e-5,
                   help="std-dev of the noisy-field exposure delay [s]")
    p.add_argument("--sigma-scale", type=float, default=0.2,
                   help="std-dev of the noisy-field rate-scale error")
    p.add_argument("--scale-mode", choices=[synth.SCALE_ONE_PLUS_K, synth.SCALE_LITERAL_K],
                   default=synth.SCALE_ONE_PLUS_K, help="how the scale error multiplies rates")


def _gen_params(args, seed: int) -> tuple[synth.GenParams, synth.PerturbParams]:
    gp = synth.GenParams(
        t_e=args.t_e,
        t_r_range=(args.t_r_min, args.t_r_max),
        omega_multiplier=args.omega_multiplier,
        max_blur_px=args.max_blur,
        seed=seed,
    )
    pp = synth.PerturbParams(
        sigma_delay=args.sigma_delay,
        sigma_scale=args.sigma_scale,
        scale_mode=args.scale_mode,
        seed=synth.derive_seed(seed, "perturb"),
    )
    return gp, pp


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gyroblur", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field", help="compute a blur field from a gyro log")
    p.add_argument("--imu", required=True, help="gyro CSV (timestamp_ns,gx,gy,gz[,ax,ay,az])")
    p.add_argument("--meta", required=True, help="frame metadata JSON (t_f,t_e,t_r [s]; rows,cols)")
    p.add_argument("--intrinsics", required=True, help="intrinsics JSON (fx,fy,cx,cy [px])")
    p.add_argument("--out", required=True, help="output BLF path")
    p.add_argument("--viz", default=None, help="optional color-wheel PNG of the field")

    p = sub.add_parser("synth", help="synthesize one blurred sample with exact/noisy fields")
    p.add_argument("--sharp", required=True, help="sharp input PNG")
    p.add_argument("--imu", required=True, help="gyro CSV")
    p.add_argument("--meta", default=None,
                   help="optional frame metadata JSON; its t_e overrides --t-e, raster must match")
    p.add_argument("--intrinsics", required=True, help="intrinsics JSON")
    p.add_argument("--out-blur", required=True, help="output blurred PNG (16-bit)")
    p.add_argument("--out-exact", required=True, help="output exact-field BLF")
    p.add_argument("--out-noisy", required=True, help="output noisy-field BLF")
    p.add_argument("--seed", type=int, default=0, help="sample seed")
    p.add_argument("--noise-db", type=float, default=None,
                   help="optionally add Gaussian noise at this PSNR level [dB]")
    _add_gen_flags(p)

    p = sub.add_parser("gen-dataset", help="generate a training dataset with a manifest")
    p.add_argument("--images", required=True, help="directory of sharp PNGs")
    p.add_argument("--imu", required=True, help="directory of gyro CSV logs")
    p.add_argument("--count", type=int, required=True, help="number of samples")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    p.add_argument("--intrinsics", default=None,
                   help="optional intrinsics JSON applied to all samples "
                        "(default: derived from each image's size)")
    _add_gen_flags(p)

    p = sub.add_parser("deblur", help="non-blind deblurring given a blur field")
    p.add_argument("--image", required=True, help="blurred PNG")
    p.add_argument("--field", required=True, help="blur field BLF")
    p.add_argument("--iters", type=int, default=50, help="Richardson-Lucy iterations")
    p.add_argument("--out", required=True, help="output PNG (16-bit)")

    p = sub.add_parser("eval", help="PSNR/SSIM between two images, JSON on stdout")
    p.add_argument("--ref", required=True, help="reference PNG")
    p.add_argument("--test", required=True, help="test PNG")
    return ap


def _cmd_field(args) -> int:
    track = imu_io.load_gyro_csv(args.imu)
    meta = imu_io.load_frame_meta(args.meta)
    intr = imu_io.load_intrinsics(args.intrinsics)
    fld = blurfield.compute_blur_field(track, meta, intr)
    blurfield.write_blf(args.out, fld)
    if args.viz:
        images.save_rgb_u8(args.viz, blurfield.field_to_color(fld))
    print(json.dumps({"out": args.out, "max_blur_px": float(fld.magnitude().max())}))
    return EXIT_OK


def _cmd_synth(args) -> int:
    sharp = images.load_image(args.sharp)
    track = imu_io.load_gyro_csv(args.imu)
    intr = imu_io.load_intrinsics(args.intrinsics)
    if args.meta is not None:
        meta = imu_io.load_frame_meta(args.meta)
        if (meta.rows, meta.cols) != sharp.shape[:2]:
            raise DomainError(
                f"meta raster {meta.rows}x{meta.cols} does not match image "
                f"{sharp.shape[0]}x{sharp.shape[1]}"
            )
        args.t_e = meta.t_e
    gp, pp = _gen_params(args, args.seed)
    sample = synth.generate_sample(sharp, track, intr, gp, pp)
    blurred = sample.blurred
    if args.noise_db is not None:
        blurred = synth.add_gaussian_noise(
            blurred, args.noise_db, synth.derive_seed(args.seed, "noise")
        )
    images.save_image(args.out_blur, blurred)
    blurfield.write_blf(args.out_exact, sample.exact_field)
    blurfield.write_blf(args.out_noisy, sample.noisy_field)
    print(json.dumps({"out_blur": args.out_blur, **sample.record}))
    return EXIT_OK


def _cmd_gen_dataset(args) -> int:
    gp, pp = _gen_params(args, args.seed)
    if args.intrinsics is not None:
        # validate once up-front; workers re-read per sample
        imu_io.load_intrinsics(args.intrinsics)
    manifest = synth.generate_dataset(
        args.images, args.imu, args.count, args.out, gp, pp, jobs=args.jobs,
        intrinsics_path=args.intrinsics,
    )
    print(json.dumps({"manifest": manifest, "count": args.count}))
    return EXIT_OK


def _cmd_deblur(args) -> int:
    img = images.load_image(args.image)
    fld = blurfield.read_blf(args.field)
    out = deconv.richardson_lucy_sv(img, fld, iters=args.iters)
    images.save_image(args.out, out)
    print(json.dumps({"out": args.out, "iters": args.iters}))
    return EXIT_OK


def _cmd_eval(args) -> int:
    ref = images.load_image(args.ref)
    test = images.load_image(args.test)
    p = metrics.psnr(ref, test)
    s = metrics.ssim(ref, test)
    print(json.dumps({"psnr": "inf" if math.isinf(p) else p, "ssim": s}))
    return EXIT_OK


_COMMANDS = {
    "field": _cmd_field,
    "synth": _cmd_synth,
    "gen-dataset": _cmd_gen_dataset,
    "deblur": _cmd_deblur,
    "eval": _cmd_eval,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (IoError, FileNotFoundError, IsADirectoryError, PermissionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except FormatError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FORMAT
    except (DomainError, GyroBlurError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
