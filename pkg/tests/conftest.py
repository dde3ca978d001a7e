import numpy as np
import pytest

from gyroblur import FrameMeta, GyroTrack, Intrinsics
from gyroblur import _kernels
from gyroblur.synth import make_shake_track, make_texture


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # JIT-compile the blur kernels once so timed tests measure steady state
    _kernels.warmup()


@pytest.fixture(scope="session")
def shake_track():
    return make_shake_track(duration=3.0, rate_hz=200, amplitude=1.0, seed=42)


@pytest.fixture(scope="session")
def texture_rgb():
    return make_texture(96, 128, seed=7)


@pytest.fixture(scope="session")
def texture_gray():
    return make_texture(96, 128, seed=7, channels=1)


@pytest.fixture
def intrinsics():
    return Intrinsics(fx=500.0, fy=500.0, cx=64.0, cy=48.0)


@pytest.fixture
def meta_global():
    # global shutter, 96x128 raster
    return FrameMeta(t_f=1.2, t_e=0.030, t_r=0.0, rows=96, cols=128)


@pytest.fixture
def meta_rolling():
    return FrameMeta(t_f=1.2, t_e=0.030, t_r=0.020, rows=96, cols=128)


def constant_track(omega, duration=3.0, n=31):
    t = np.linspace(0.0, duration, n)
    return GyroTrack(t=t, omega=np.tile(np.asarray(omega, float), (n, 1)))


@pytest.fixture
def zero_track():
    return constant_track([0.0, 0.0, 0.0])
