import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gyroblur.errors import InvalidStepError, OutOfRangeError
from gyroblur.imu_io import GyroTrack
from gyroblur.rotation import (
    integrate_rotation,
    integrate_to_times,
    quat_conj,
    quat_mul,
    quat_normalize,
    quat_to_matrix,
    quats_to_matrices,
)

from conftest import constant_track

IDENTITY = np.array([1.0, 0.0, 0.0, 0.0])


def closed_form(omega, dt):
    """Exact solution for constant body rate: q = (cos(|w|dt/2), sin(..) w_hat)."""
    omega = np.asarray(omega, float)
    mag = np.linalg.norm(omega)
    if mag == 0.0:
        return IDENTITY.copy()
    half = 0.5 * mag * dt
    return np.concatenate([[math.cos(half)], math.sin(half) * omega / mag])


def quat_dist(a, b):
    return min(np.linalg.norm(a - b), np.linalg.norm(a + b))


unit_quats = st.builds(
    lambda w, x, y, z: quat_normalize([w, x, y, z]),
    *[st.floats(-1, 1).filter(lambda v: abs(v) > 1e-3) for _ in range(4)],
)


class TestQuatAlgebra:
    def test_identity_product(self):
        q = quat_normalize([0.3, -0.5, 0.2, 0.7])
        assert np.allclose(quat_mul(IDENTITY, q), q)
        assert np.allclose(quat_mul(q, IDENTITY), q)

    def test_i_times_j_is_k(self):
        assert np.allclose(quat_mul([0, 1, 0, 0], [0, 0, 1, 0]), [0, 0, 0, 1])

    def test_non_commutative(self):
        rng = np.random.default_rng(5)
        seen_diff = False
        for _ in range(10):
            a = quat_normalize(rng.normal(size=4))
            b = quat_normalize(rng.normal(size=4))
            if not np.allclose(quat_mul(a, b), quat_mul(b, a), atol=1e-12):
                seen_diff = True
        assert seen_diff

    def test_conjugate_is_inverse(self):
        q = quat_normalize([0.2, 0.4, -0.1, 0.8])
        assert np.allclose(quat_mul(q, quat_conj(q)), IDENTITY, atol=1e-15)


class TestQuatToMatrix:
    def test_identity(self):
        assert np.array_equal(quat_to_matrix(IDENTITY), np.eye(3))

    def test_90_deg_about_z(self):
        q = closed_form([0, 0, 1], math.pi / 2)
        assert np.allclose(quat_to_matrix(q) @ [1, 0, 0], [0, 1, 0], atol=1e-15)

    def test_double_cover(self):
        q = quat_normalize([0.3, -0.5, 0.2, 0.7])
        assert np.allclose(quat_to_matrix(q), quat_to_matrix(-q), atol=1e-15)

    @given(unit_quats)
    @settings(max_examples=50, deadline=None)
    def test_orthonormal_det_plus_one(self, q):
        m = quat_to_matrix(q)
        assert np.allclose(m @ m.T, np.eye(3), atol=1e-12)
        assert abs(np.linalg.det(m) - 1.0) < 1e-12

    def test_vectorized_matches_scalar(self):
        rng = np.random.default_rng(2)
        qs = np.array([quat_normalize(rng.normal(size=4)) for _ in range(20)])
        batch = quats_to_matrices(qs)
        for q, m in zip(qs, batch):
            assert np.array_equal(quat_to_matrix(q), m)


class TestIntegrateRotation:
    def test_zero_rate_is_identity(self, zero_track):
        q = integrate_rotation(zero_track, 0.0, 0.03)
        assert np.array_equal(q, IDENTITY)

    def test_constant_rate_closed_form(self):
        track = constant_track([0, 0, 1])
        q = integrate_rotation(track, 0.0, 1.0)
        assert quat_dist(q, closed_form([0, 0, 1], 1.0)) < 1e-9

    def test_piecewise_constant_composition(self):
        # 0.5 s about z then 0.5 s about x, switched over a 1 ns ramp
        eps = 1e-9
        t = np.array([0.0, 0.5, 0.5 + eps, 1.0 + eps])
        om = np.array([[0, 0, 1], [0, 0, 1], [1, 0, 0], [1, 0, 0]], float)
        track = GyroTrack(t=t, omega=om)
        q = integrate_rotation(track, 0.0, 1.0 + eps)
        expected = quat_mul(closed_form([0, 0, 1], 0.5), closed_form([1, 0, 0], 0.5))
        assert quat_dist(q, expected) < 1e-8

    def test_norm_preserved(self, shake_track):
        q = integrate_rotation(shake_track, 0.2, 1.9)
        assert abs(np.linalg.norm(q) - 1.0) < 1e-9

    def test_inverse_under_time_reversal(self, shake_track):
        t1, t2 = 0.4, 1.6
        q = integrate_rotation(shake_track, t1, t2)
        # reverse the track about the window midpoint and flip rate signs
        rev = GyroTrack(
            t=(t1 + t2) - shake_track.t[::-1], omega=-shake_track.omega[::-1]
        )
        q_rev = integrate_rotation(rev, t1, t2)
        assert quat_dist(q_rev, quat_conj(q)) < 1e-7

    def test_step_convergence_order(self):
        track = constant_track([0, 0, 1])
        exact = closed_form([0, 0, 1], 1.0)
        e1 = quat_dist(integrate_rotation(track, 0.0, 1.0, h=0.05), exact)
        e2 = quat_dist(integrate_rotation(track, 0.0, 1.0, h=0.025), exact)
        assert e1 / e2 >= 8.0

    def test_empty_window(self, shake_track):
        assert np.array_equal(integrate_rotation(shake_track, 0.5, 0.5), IDENTITY)

    def test_window_outside_span(self, shake_track):
        with pytest.raises(OutOfRangeError):
            integrate_rotation(shake_track, -1.0, 0.5)
        with pytest.raises(OutOfRangeError):
            integrate_rotation(shake_track, 0.5, 99.0)
        with pytest.raises(OutOfRangeError):
            integrate_rotation(shake_track, 1.0, 0.5)

    def test_bad_step(self, shake_track):
        with pytest.raises(InvalidStepError):
            integrate_rotation(shake_track, 0.1, 0.2, h=0.0)

    def test_marching_matches_direct(self, shake_track):
        # snapshots along the way equal fresh integrations over the same spans
        times = np.array([0.3, 0.7, 1.1, 1.8])
        qs = integrate_to_times(shake_track, times)
        for i, ti in enumerate(times):
            direct = integrate_rotation(shake_track, times[0], float(ti))
            assert quat_dist(qs[i], direct) < 1e-12
