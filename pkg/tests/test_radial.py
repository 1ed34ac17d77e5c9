import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diracsector import (DomainError, LogGrid, RadialExpression, RadialSample, RegimeError, SectorCoupling,
                         apply_d, boundary_model, critical_identities, eval_u_alpha, zero_mode_residual)
from diracsector.params import Regime, lambda_of
from diracsector.radial import chi, intertwining_residual, zero_mode_grid

PI = math.pi


def test_p_matrix_example():
    bm = boundary_model(SectorCoupling(2 * PI, 0.0), 0)
    assert bm.regime is Regime.SUBCRITICAL
    np.testing.assert_allclose(bm.matrix, [[2, 0], [0, -2]], atol=1e-14)


def test_q_matrix_example():
    bm = boundary_model(SectorCoupling(PI, 0.5), 0)
    np.testing.assert_allclose(bm.matrix, [[0.5, -0.5], [0.5, -0.5]], atol=1e-15)
    assert np.max(np.abs(bm.matrix @ bm.matrix)) == 0.0


def test_r_matrix_example():
    bm = boundary_model(SectorCoupling(PI, 2.0), 0)
    assert bm.regime is Regime.SUPERCRITICAL
    assert abs(np.linalg.det(bm.matrix)) > 1e-12 * np.linalg.norm(bm.matrix) ** 2


def test_esa_channel_has_no_matrix():
    bm = boundary_model(SectorCoupling(PI / 2, 0.0), 0)
    assert bm.matrix is None
    with pytest.raises(RegimeError):
        bm.require_matrix()
    with pytest.raises(RegimeError):
        eval_u_alpha(SectorCoupling(PI / 2, 0.0), 0, 0.0, 0.5)


def test_boundary_columns_span_indicial_eigenvectors():
    # P, Q, R columns solve r u' = N u for the pure powers used in u^(alpha)
    for omega, nu in [(2 * PI, 0.3), (PI, 2.0), (2 * PI, 0.1)]:
        sc = SectorCoupling(omega, nu)
        bm = boundary_model(sc, 0)
        N = RadialExpression.of(sc, 0).indicial_matrix
        for col, p in zip(bm.matrix.T, (bm.root, -bm.root)):
            np.testing.assert_allclose(N @ col, p * col, atol=1e-12)


def test_apply_d_kernel_elements():
    g = LogGrid(1e-2, 1e2, 2000)
    r = g.nodes
    expr = RadialExpression(0.0, 1.0)
    out = apply_d(expr, RadialSample(g, np.column_stack([r, 0 * r])))
    assert np.max(np.abs(out.values[2:-2])) < 1e-10 * np.max(r)
    out = apply_d(expr, RadialSample(g, np.column_stack([0 * r, 1 / r])))
    assert np.max(np.abs(out.u1 * r**2)) < 1e-8


def test_u_alpha_examples():
    assert np.all(eval_u_alpha(SectorCoupling(2 * PI, 0.0), 0, 0.0, np.array([2.0, 3.0, 10.0])) == 0)
    np.testing.assert_allclose(eval_u_alpha(SectorCoupling(2 * PI, 0.0), 0, 0.0, 1.0), [2, 0], atol=1e-14)
    np.testing.assert_allclose(eval_u_alpha(SectorCoupling(PI, 0.5), 0, 0.0, 1.0), [1, 0], atol=1e-15)


def test_u_alpha_domain():
    sc = SectorCoupling(2 * PI, 0.0)
    with pytest.raises(DomainError):
        eval_u_alpha(sc, 0, PI, 0.5)
    with pytest.raises(DomainError):
        eval_u_alpha(sc, 0, 0.0, -1.0)


@pytest.mark.parametrize("omega,nu,alpha", [(2 * PI, 0.0, 0.0), (PI, 0.5, PI / 2), (PI, 2.0, 0.3)])
def test_zero_mode_examples(omega, nu, alpha):
    assert zero_mode_residual(SectorCoupling(omega, nu), 0, alpha) < 1e-6


def test_zero_mode_second_order_stencil_converges():
    sc = SectorCoupling(2 * PI, 0.0)
    res = [zero_mode_residual(sc, 0, 0.0, zero_mode_grid(n), order=2) for n in (200, 400, 800)]
    orders = np.log2(np.array(res[:-1]) / np.array(res[1:]))
    assert np.all(orders > 1.8)


def test_zero_mode_grid_must_avoid_cutoff():
    with pytest.raises(DomainError):
        zero_mode_residual(SectorCoupling(2 * PI, 0.0), 0, 0.0, LogGrid(1e-3, 1.5, 100))


def test_intertwining_on_bump():
    sc = SectorCoupling(PI / 2, 0.5)
    g = LogGrid(1e-3, 1e3, 4000)
    b = np.exp(-np.log(g.nodes) ** 2 / 0.5)
    u = RadialSample(g, np.column_stack([b, 0.3j * b * g.nodes]))
    assert intertwining_residual(sc, 0, u) < 1e-8


def test_intertwining_with_flipped_derivatives_fails():
    # negative control: the opposite derivative signs do not intertwine
    sc = SectorCoupling(PI / 2, 0.5)
    g = LogGrid(1e-3, 1e3, 2000)
    r = g.nodes
    b = np.exp(-np.log(r) ** 2 / 0.5)
    u = RadialSample(g, np.column_stack([b, 0.3 * b]))
    bm = boundary_model(sc, 0)
    lhs = apply_d(RadialExpression(sc.nu, bm.lambda_k), u).values @ bm.m1.T
    v = u.values @ bm.m2.T
    dv = g.d_dr(v)
    lt = bm.lambda_tilde
    rhs = np.column_stack([-dv[:, 1] - lt / r * v[:, 1], dv[:, 0] - lt / r * v[:, 0]])
    assert np.max(np.abs(lhs - rhs)) > 0.1


def test_critical_identities():
    out = critical_identities(SectorCoupling(PI, 0.5), 0)
    assert max(out.values()) < 1e-14
    with pytest.raises(RegimeError):
        critical_identities(SectorCoupling(2 * PI, 0.0), 0)


def test_chi_profile():
    r = np.linspace(0.01, 3, 600)
    c = chi(r)
    assert np.all(c[r <= 1] == 1) and np.all(c[r >= 2] == 0)
    assert np.all(np.diff(c) <= 0)
    assert np.all((0 <= c) & (c <= 1))


# -- properties ---------------------------------------------------------------

non_esa = st.tuples(st.floats(PI / 2, 2 * PI), st.floats(0, 4), st.integers(0, 3)).filter(
    lambda t: lambda_of(t[0], t[2]) ** 2 - t[1] ** 2 < 0.24
    and abs(lambda_of(t[0], t[2]) ** 2 - t[1] ** 2) > 1e-3)


@settings(max_examples=60, deadline=None)
@given(non_esa)
def test_boundary_matrices_invertible(t):
    omega, nu, k = t
    M = boundary_model(SectorCoupling(omega, nu), k).matrix
    assert abs(np.linalg.det(M)) > 1e-12 * np.linalg.norm(M) ** 2


@settings(max_examples=60, deadline=None)
@given(st.floats(PI / 2, 2 * PI), st.integers(0, 3), st.sampled_from([1.0, -1.0]))
def test_q_nilpotent(omega, k, sign):
    lam = lambda_of(omega, k)
    sc = SectorCoupling(omega, sign * lam)
    bm = boundary_model(sc, k)
    assert bm.regime is Regime.CRITICAL
    assert np.max(np.abs(bm.matrix @ bm.matrix)) < 1e-12


@settings(max_examples=60, deadline=None)
@given(non_esa, st.floats(0, PI, exclude_max=True))
def test_u_alpha_linear_in_angle(t, alpha):
    omega, nu, k = t
    sc = SectorCoupling(omega, nu)
    r = np.geomspace(1e-3, 2.5, 40)
    u = eval_u_alpha(sc, k, alpha, r)
    u0 = eval_u_alpha(sc, k, 0.0, r)
    u90 = eval_u_alpha(sc, k, PI / 2, r)
    np.testing.assert_allclose(u, math.cos(alpha) * u0 + math.sin(alpha) * u90, atol=1e-12 * np.max(np.abs(u0) + np.abs(u90)))


@settings(max_examples=25, deadline=None)
@given(non_esa, st.sampled_from([0.0, PI / 4, PI / 2, 3 * PI / 4]))
def test_zero_mode_residual_decreases(t, alpha):
    omega, nu, k = t
    sc = SectorCoupling(omega, nu)
    res = [zero_mode_residual(sc, k, alpha, zero_mode_grid(n), order=2) for n in (400, 800)]
    assert res[1] <= res[0] / 3.0 or res[1] < 1e-12
