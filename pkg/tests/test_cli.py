import hashlib
import json

import numpy as np
import pytest

from gyroblur import cli
from gyroblur.blurfield import BlurField, read_blf, write_blf
from gyroblur.images import load_image, save_image
from gyroblur.imu_io import dump_gyro_csv
from gyroblur.synth import make_shake_track, make_texture

from conftest import constant_track


@pytest.fixture
def workspace(tmp_path):
    """IMU log, frame meta, intrinsics and a sharp PNG, ready for the CLI."""
    track = make_shake_track(duration=2.5, rate_hz=200, amplitude=1.0, seed=1)
    (tmp_path / "imu.csv").write_text(dump_gyro_csv(track))
    zero = constant_track([0, 0, 0], duration=2.5)
    (tmp_path / "zero.csv").write_text(dump_gyro_csv(zero))
    meta = dict(t_f=1.0, t_e=0.03, t_r=0.02, rows=48, cols=64)
    (tmp_path / "meta.json").write_text(json.dumps(meta))
    (tmp_path / "meta_gs.json").write_text(json.dumps({**meta, "t_r": 0.0}))
    (tmp_path / "intr.json").write_text(json.dumps(dict(fx=200.0, fy=200.0, cx=32.0, cy=24.0)))
    save_image(tmp_path / "sharp.png", make_texture(48, 64, seed=2))
    return tmp_path


def run(args):
    return cli.main([str(a) for a in args])


class TestField:
    def test_zero_rate_all_zero_blf(self, workspace, capsys):
        out = workspace / "zero.blf"
        code = run(["field", "--imu", workspace / "zero.csv", "--meta", workspace / "meta.json",
                    "--intrinsics", workspace / "intr.json", "--out", out])
        assert code == 0
        fld = read_blf(out)
        assert not fld.u.any() and not fld.v.any()
        payload = json.loads(capsys.readouterr().out)
        assert payload["max_blur_px"] == 0.0

    def test_rolling_vs_global_checksums_differ(self, workspace):
        a, b = workspace / "rs.blf", workspace / "gs.blf"
        run(["field", "--imu", workspace / "imu.csv", "--meta", workspace / "meta.json",
             "--intrinsics", workspace / "intr.json", "--out", a])
        run(["field", "--imu", workspace / "imu.csv", "--meta", workspace / "meta_gs.json",
             "--intrinsics", workspace / "intr.json", "--out", b])
        assert hashlib.sha256(a.read_bytes()).digest() != hashlib.sha256(b.read_bytes()).digest()

    def test_missing_file_is_io_error(self, workspace, capsys):
        code = run(["field", "--imu", workspace / "nope.csv", "--meta", workspace / "meta.json",
                    "--intrinsics", workspace / "intr.json", "--out", workspace / "x.blf"])
        assert code == cli.EXIT_IO
        assert "error" in capsys.readouterr().err

    def test_malformed_csv_is_format_error(self, workspace):
        bad = workspace / "bad.csv"
        bad.write_text("1,2\n")
        code = run(["field", "--imu", bad, "--meta", workspace / "meta.json",
                    "--intrinsics", workspace / "intr.json", "--out", workspace / "x.blf"])
        assert code == cli.EXIT_FORMAT

    def test_viz_written(self, workspace):
        out, viz = workspace / "f.blf", workspace / "f.png"
        run(["field", "--imu", workspace / "imu.csv", "--meta", workspace / "meta.json",
             "--intrinsics", workspace / "intr.json", "--out", out, "--viz", viz])
        arr = load_image(viz)
        assert arr.shape == (48, 64, 3)


class TestSynth:
    def _args(self, ws, suffix, seed=5):
        return ["synth", "--sharp", ws / "sharp.png", "--imu", ws / "imu.csv",
                "--intrinsics", ws / "intr.json",
                "--out-blur", ws / f"b{suffix}.png",
                "--out-exact", ws / f"e{suffix}.blf",
                "--out-noisy", ws / f"n{suffix}.blf",
                "--seed", seed]

    def test_deterministic_bytes(self, workspace):
        assert run(self._args(workspace, 1)) == 0
        assert run(self._args(workspace, 2)) == 0
        for a, b in (("b1.png", "b2.png"), ("e1.blf", "e2.blf"), ("n1.blf", "n2.blf")):
            assert (workspace / a).read_bytes() == (workspace / b).read_bytes()

    def test_zero_rate_blur_equals_sharp(self, workspace):
        args = self._args(workspace, 3)
        args[args.index("--imu") + 1] = workspace / "zero.csv"
        assert run(args) == 0
        assert (workspace / "b3.png").read_bytes() == (workspace / "sharp.png").read_bytes()

    def test_clamp_respected(self, workspace):
        args = self._args(workspace, 4) + ["--omega-multiplier", 50, "--max-blur", 30]
        assert run(args) == 0
        assert read_blf(workspace / "e4.blf").magnitude().max() <= 30.0 + 1e-3

    def test_meta_dimension_check(self, workspace):
        bad_meta = workspace / "badmeta.json"
        bad_meta.write_text(json.dumps(dict(t_f=1.0, t_e=0.03, t_r=0.0, rows=7, cols=7)))
        args = self._args(workspace, 5) + ["--meta", bad_meta]
        assert run(args) == cli.EXIT_DOMAIN


class TestGenDataset:
    def test_manifest_deterministic(self, workspace, tmp_path):
        img_dir = workspace / "imgs"
        imu_dir = workspace / "logs"
        img_dir.mkdir()
        imu_dir.mkdir()
        save_image(img_dir / "a.png", make_texture(32, 48, seed=3))
        (imu_dir / "a.csv").write_text((workspace / "imu.csv").read_text())
        outs = []
        for name in ("d1", "d2"):
            out = tmp_path / name
            assert run(["gen-dataset", "--images", img_dir, "--imu", imu_dir,
                        "--count", 3, "--out", out, "--seed", 42]) == 0
            outs.append((out / "manifest.jsonl").read_bytes())
        assert outs[0] == outs[1]


class TestDeblur:
    def test_zero_field_close_to_identity(self, workspace):
        fld = BlurField.zeros(48, 64)
        write_blf(workspace / "z.blf", fld)
        out = workspace / "deb.png"
        assert run(["deblur", "--image", workspace / "sharp.png", "--field", workspace / "z.blf",
                    "--iters", 10, "--out", out]) == 0
        a = load_image(workspace / "sharp.png")
        b = load_image(out)
        assert np.abs(a - b).max() < 1e-3  # eps-guard drift + 16-bit quantization

    def test_dimension_mismatch_exit(self, workspace):
        write_blf(workspace / "small.blf", BlurField.zeros(4, 4))
        code = run(["deblur", "--image", workspace / "sharp.png",
                    "--field", workspace / "small.blf", "--iters", 5,
                    "--out", workspace / "d.png"])
        assert code == cli.EXIT_DOMAIN


class TestEval:
    def test_self_eval(self, workspace, capsys):
        assert run(["eval", "--ref", workspace / "sharp.png", "--test", workspace / "sharp.png"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload == {"psnr": "inf", "ssim": 1.0}

    def test_noise_case(self, workspace, capsys, tmp_path):
        img = np.full((512, 512), 0.5, np.float32)
        from gyroblur.synth import add_gaussian_noise

        save_image(tmp_path / "clean.png", img)
        save_image(tmp_path / "noisy.png", add_gaussian_noise(img, 30.0, seed=9))
        assert run(["eval", "--ref", tmp_path / "clean.png", "--test", tmp_path / "noisy.png"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert abs(payload["psnr"] - 30.0) < 0.3

    def test_size_mismatch(self, workspace, tmp_path):
        save_image(tmp_path / "other.png", make_texture(24, 24, seed=1))
        code = run(["eval", "--ref", workspace / "sharp.png", "--test", tmp_path / "other.png"])
        assert code == cli.EXIT_DOMAIN


class TestUsage:
    def test_unknown_flag_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            cli.main(["eval", "--bogus", "x"])
        assert exc.value.code == 2

    def test_help_lists_subcommands(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["--help"])
        assert exc.value.code == 0
        out = capsys.readouterr().out
        for name in ("field", "synth", "gen-dataset", "deblur", "eval"):
            assert name in out
