import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diracsector import AngularGrid, AngularMode, DomainError, ResolutionError, check_mode_identities, eval_mode, gram
from diracsector.angular import apply_spin_orbit, radial_flip, sigma_dot_er

PI = math.pi


def test_mode_values_at_zero():
    c = 1 / math.sqrt(2 * PI)
    np.testing.assert_allclose(eval_mode(AngularMode(0, "+", PI), 0.0), [c, c], atol=1e-15)
    np.testing.assert_allclose(eval_mode(AngularMode(0, "-", PI), 0.0), [-1j * c, -1j * c], atol=1e-15)


def test_mode_value_at_far_edge():
    c = 1 / math.sqrt(2 * PI)
    np.testing.assert_allclose(eval_mode(AngularMode(0, "+", PI), PI), [c, c], atol=1e-15)


def test_eval_outside_sector():
    with pytest.raises(DomainError):
        eval_mode(AngularMode(0, "+", PI), 3.5)


@pytest.mark.parametrize("k,sign,omega", [(0, "+", PI / 2), (3, "-", 2 * PI)])
def test_identity_residuals(k, sign, omega):
    res = check_mode_identities(AngularMode(k, sign, omega), AngularGrid.uniform(omega, 1001))
    assert res.max < 1e-12


def test_wrong_lambda_is_detected():
    mode = AngularMode(0, "+", PI / 2)
    res = check_mode_identities(mode, AngularGrid.uniform(PI / 2, 1001), lam_override=mode.lam + 0.1)
    assert res.eigen >= 0.1 * np.max(np.abs(eval_mode(mode, 0.0)))


def test_gram_examples():
    G = gram(PI, 1, AngularGrid.uniform(PI, 2001))
    assert np.max(np.abs(G - np.eye(2))) < 1e-10
    assert np.max(np.abs(np.diag(G) - 1)) < 1e-12
    G = gram(2 * PI, 4, AngularGrid.uniform(2 * PI, 8001))
    assert np.max(np.abs(G - np.eye(8))) < 1e-8


def test_gram_gauss_grid():
    G = gram(PI, 3, AngularGrid.gauss(PI, 64))
    assert np.max(np.abs(G - np.eye(6))) < 1e-12


def test_weights_sum_to_omega():
    for grid in (AngularGrid.uniform(1.3, 17), AngularGrid.gauss(1.3, 17)):
        assert grid.weights.sum() == pytest.approx(1.3, rel=1e-12)


def test_underresolved_grid_is_rejected():
    with pytest.raises(ResolutionError):
        gram(2 * PI, 40, AngularGrid.uniform(2 * PI, 101))


def test_bad_grids():
    with pytest.raises(DomainError):
        AngularGrid(PI, np.array([0.0, 2.0, 1.0]), np.ones(3))
    with pytest.raises(DomainError):
        AngularGrid(PI, np.array([0.0, 1.0]), np.array([1.0, -1.0]))
    with pytest.raises(DomainError):
        AngularMode(0, "x", PI)


# -- properties ---------------------------------------------------------------

omegas = st.floats(min_value=0.1, max_value=2 * PI)


@settings(max_examples=100, deadline=None)
@given(omegas, st.integers(0, 12), st.sampled_from("+-"))
def test_identities_hold_everywhere(omega, k, sign):
    res = check_mode_identities(AngularMode(k, sign, omega), AngularGrid.uniform(omega, 257))
    assert res.max < 1e-10


@settings(max_examples=100, deadline=None)
@given(omegas, st.integers(0, 50))
def test_boundary_phase_is_odd_multiple(omega, k):
    lam = AngularMode(k, "+", omega).lam
    q = 2 * lam * omega / PI
    assert abs(q - round(q)) < 1e-12 and round(q) % 2 == 1


@settings(max_examples=100, deadline=None)
@given(omegas, st.integers(0, 8), st.sampled_from("+-"))
def test_flip_twice_is_minus_identity(omega, k, sign):
    th = np.linspace(0, omega, 33)
    f = eval_mode(AngularMode(k, sign, omega), th)
    np.testing.assert_allclose(radial_flip(radial_flip(f, th), th), -f, atol=1e-14)


@settings(max_examples=50, deadline=None)
@given(st.floats(-10, 10))
def test_sigma_er_squares_to_identity(theta):
    m = sigma_dot_er(theta)
    np.testing.assert_allclose(m @ m, np.eye(2), atol=1e-14)


@settings(max_examples=50, deadline=None)
@given(omegas, st.integers(0, 8))
def test_eigenvalue_sign(omega, k):
    th = np.linspace(0, omega, 9)
    for sign in "+-":
        m = AngularMode(k, sign, omega)
        np.testing.assert_allclose(apply_spin_orbit(m, th), m.eigenvalue * eval_mode(m, th), atol=1e-12)
