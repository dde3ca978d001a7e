"""Synthesizing a training pair
==============================

One call produces everything a training sample needs: the blurred image
made with the exact field, and a noisy field computed after perturbing the
gyro data the way a real IMU pipeline would be wrong (exposure-start delay,
rate-scale error). The exposure window and readout time are drawn per seed.
"""

import os

from gyroblur import GenParams, Intrinsics, PerturbParams, psnr
from gyroblur.blurfield import field_to_color, write_blf
from gyroblur.images import save_image, save_rgb_u8
from gyroblur.synth import generate_sample, make_shake_track, make_texture

out_dir = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(out_dir, exist_ok=True)

sharp = make_texture(270, 480, seed=11)
track = make_shake_track(duration=4.0, rate_hz=200.0, amplitude=2.0, seed=12)
intrinsics = Intrinsics(fx=432.0, fy=432.0, cx=240.0, cy=135.0)

# production recipe: 30 ms exposure, readout drawn from [0, 30] ms,
# rates doubled, blur capped at 100 px
gen = GenParams(seed=100)
perturb = PerturbParams(seed=101)

sample = generate_sample(sharp, track, intrinsics, gen, perturb)

rec = sample.record
print(f"exposure start t_f = {rec['t_f']:.3f} s, readout t_r = {rec['t_r'] * 1e3:.1f} ms")
print(f"effective rate multiplier {rec['omega_multiplier_effective']:.3f} "
      f"(cap engages when blur would exceed {gen.max_blur_px:.0f} px)")
print(f"noisy-field perturbations: delay t_d = {rec['t_d'] * 1e6:+.2f} us, "
      f"scale k = {rec['k']:+.3f}")
print(f"blur extent: max {sample.exact_field.magnitude().max():.1f} px")
print(f"PSNR(blurred vs sharp) = {psnr(sharp, sample.blurred):.2f} dB")

save_image(os.path.join(out_dir, "pair_sharp.png"), sample.sharp)
save_image(os.path.join(out_dir, "pair_blurred.png"), sample.blurred)
write_blf(os.path.join(out_dir, "pair_exact.blf"), sample.exact_field)
write_blf(os.path.join(out_dir, "pair_noisy.blf"), sample.noisy_field)
save_rgb_u8(os.path.join(out_dir, "pair_exact_viz.png"), field_to_color(sample.exact_field))
save_rgb_u8(os.path.join(out_dir, "pair_noisy_viz.png"), field_to_color(sample.noisy_field))
print(f"sample written to {out_dir}/pair_*")
