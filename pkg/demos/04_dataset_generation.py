"""Dataset production
====================

Writes a small dataset the way the CLI's `gen-dataset` does: sharp/blurred
PNG pairs plus exact/noisy BLF fields and a JSON-lines manifest. Everything
is a pure function of the master seed; regenerating any prefix of the
dataset reproduces the same bytes.
"""

import json
import os

from gyroblur import GenParams, PerturbParams
from gyroblur.images import save_image
from gyroblur.imu_io import dump_gyro_csv
from gyroblur.synth import generate_dataset, make_shake_track, make_texture

base = os.path.join(os.path.dirname(__file__), "output", "mini_dataset")
img_dir = os.path.join(base, "images")
imu_dir = os.path.join(base, "imu")
out_dir = os.path.join(base, "samples")
os.makedirs(img_dir, exist_ok=True)
os.makedirs(imu_dir, exist_ok=True)

# inputs: three textures, two motion logs of different intensity
for i in range(3):
    save_image(os.path.join(img_dir, f"scene{i}.png"), make_texture(135, 240, seed=i))
for i, amp in enumerate((0.8, 2.5)):
    track = make_shake_track(duration=3.0, rate_hz=200.0, amplitude=amp, seed=30 + i)
    with open(os.path.join(imu_dir, f"log{i}.csv"), "w") as f:
        f.write(dump_gyro_csv(track))

manifest = generate_dataset(
    img_dir, imu_dir, count=12, out_dir=out_dir,
    gp=GenParams(seed=1234), pp=PerturbParams(seed=0),
)

records = [json.loads(line) for line in open(manifest)]
print(f"{len(records)} samples in {out_dir}")
print(f"{'idx':>3s} {'t_r [ms]':>9s} {'mult_eff':>9s} {'k':>7s}")
for rec in records:
    print(f"{rec['index']:3d} {rec['t_r'] * 1e3:9.2f} "
          f"{rec['omega_multiplier_effective']:9.3f} {rec['k']:+7.3f}")
print("rerun this script: every byte, including the manifest, is identical")
