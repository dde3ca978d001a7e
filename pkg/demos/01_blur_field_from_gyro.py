"""Blur fields from gyroscope data
=================================

Builds a handheld-style angular-rate track, computes the per-pixel blur
field for one frame under global-shutter and rolling-shutter timing, and
renders both with the direction/magnitude color wheel.
"""

import os

import numpy as np

from gyroblur import FrameMeta, Intrinsics, compute_blur_field, field_to_color
from gyroblur.images import save_rgb_u8
from gyroblur.synth import make_shake_track

out_dir = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(out_dir, exist_ok=True)

# A 4-second synthetic log at 200 Hz. Swap in load_gyro_csv(path) for a real
# one; the format is `timestamp_ns,gx,gy,gz[,ax,ay,az]` with '#' comments.
track = make_shake_track(duration=4.0, rate_hz=200.0, amplitude=1.5, seed=3)
print(f"track: {len(track)} samples over {track.t_end - track.t_start:.1f} s")

intrinsics = Intrinsics(fx=432.0, fy=432.0, cx=240.0, cy=135.0)

# 30 ms exposure starting mid-track; readout 0 -> global shutter
global_meta = FrameMeta(t_f=1.7, t_e=0.030, t_r=0.0, rows=270, cols=480)
rolling_meta = FrameMeta(t_f=1.7, t_e=0.030, t_r=0.025, rows=270, cols=480)

for name, meta in [("global", global_meta), ("rolling", rolling_meta)]:
    field = compute_blur_field(track, meta, intrinsics)
    mag = field.magnitude()
    print(
        f"{name:8s} shutter: |blur| max {mag.max():6.2f} px, "
        f"mean {mag.mean():6.2f} px, row spread "
        f"{np.ptp(mag.mean(axis=1)):.2f} px"
    )
    save_rgb_u8(os.path.join(out_dir, f"field_{name}.png"), field_to_color(field))

print(f"color-wheel renderings written to {out_dir}/field_*.png")
print("hue encodes direction, saturation encodes magnitude (white = no blur)")
