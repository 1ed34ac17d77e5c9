"""Grid helpers and agreement between the numba and numpy kernel flavours."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diracsector import DomainError, LogGrid, RadialSample, SectorCoupling
from diracsector.numerics.kernels import numba_kernels, numpy_kernels
from diracsector.numerics.shooting import decaying_direction

BACKENDS = [numba_kernels, numpy_kernels]


def test_loggrid_basics():
    g = LogGrid(1e-3, 1e3, 601)
    assert g.nodes[0] == 1e-3 and g.nodes[-1] == 1e3
    ratios = g.nodes[1:] / g.nodes[:-1]
    assert np.max(np.abs(ratios / g.ratio - 1)) < 1e-13
    assert g.decades == pytest.approx(6)
    with pytest.raises(ValueError):
        g.nodes[0] = 1.0


@pytest.mark.parametrize("args", [(0, 1, 100), (2, 1, 100), (1e-3, 1, 10), (1e-3, math.inf, 100)])
def test_loggrid_rejects(args):
    with pytest.raises(DomainError):
        LogGrid(*args)


def test_integrate_power():
    g = LogGrid(1e-3, 1.0, 2001)
    # int_0^1 r^2 dr, truncated at 1e-3
    assert g.integrate(g.nodes**2) == pytest.approx((1 - 1e-9) / 3, rel=2e-5)


@pytest.mark.parametrize("order,tol", [(2, 5e-5), (4, 3e-9)])
def test_d_dr_power(order, tol):
    g = LogGrid(1e-2, 1e2, 2000)
    r = g.nodes
    err = g.d_dr(r**1.7, order) - 1.7 * r**0.7
    assert np.max(np.abs(err / r**0.7)) < tol


def test_d_dr_rejects_bad_order():
    g = LogGrid(1e-2, 1e2, 100)
    with pytest.raises(ValueError):
        g.d_dr(g.nodes, order=3)


def test_radial_sample_algebra():
    g = LogGrid(1e-2, 1, 32)
    a = RadialSample.from_function(g, lambda r: (r, 1j))
    b = 2 * a + a
    np.testing.assert_allclose(b.values, 3 * a.values)
    assert a.l2_norm_sq() == pytest.approx(g.integrate(g.nodes**2 + 1))
    with pytest.raises(DomainError):
        RadialSample(g, np.zeros((5, 2)))


@pytest.mark.parametrize("order", [2, 4])
def test_log_derivative_backends_agree(order):
    rng = np.random.default_rng(1)
    f = rng.normal(size=(300, 2)) + 1j * rng.normal(size=(300, 2))
    a = numba_kernels.log_derivative(f, 0.01, order)
    b = numpy_kernels.log_derivative(f, 0.01, order)
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-9)
    real = rng.normal(size=300)
    np.testing.assert_allclose(numba_kernels.log_derivative(real, 0.01, order),
                               numpy_kernels.log_derivative(real, 0.01, order), atol=1e-9)


def test_hardy_assembly_and_solve_agree():
    s = np.linspace(-10, 10, 500)
    parts = [k.hardy_assemble(s, -0.25) for k in BACKENDS]
    for a, b in zip(*parts):
        np.testing.assert_allclose(a, b, rtol=1e-13, atol=1e-13)
    a_d, a_o, b_d, b_o = parts[0]
    rhs = np.linspace(0, 1, a_d.size)
    xa, fa = numba_kernels.tridiag_solve(a_d, a_o, rhs)
    xb, fb = numpy_kernels.tridiag_solve(a_d, a_o, rhs)
    assert fa == fb == -1
    np.testing.assert_allclose(xa, xb, rtol=1e-9)


def test_tridiag_reports_indefinite():
    d = np.array([1.0, -1.0, 1.0])
    o = np.array([0.1, 0.1])
    for k in BACKENDS:
        _, fail = k.tridiag_solve(d, o, np.ones(3))
        assert fail >= 0


@pytest.mark.parametrize("omega,nu", [(2 * math.pi, 0.0), (math.pi, 2.0), (math.pi / 2, 0.3)])
def test_shoot_backends_agree(omega, nu):
    sc = SectorCoupling(omega, nu)
    lam = math.pi / (2 * sc.omega)
    N = np.array([[lam, -nu], [nu, -lam]])
    g = LogGrid(1e-8, 50, 800)
    y0 = decaying_direction(N, -1j, g.r_max)
    s = g.s[::-1].copy()
    ya, ra, sa = numba_kernels.shoot(N, -1j, y0, s)
    yb, rb, sb = numpy_kernels.shoot(N, -1j, y0, s)
    assert sa == sb == 0
    # unit vectors are defined up to a common phase
    la = ra + np.log(np.abs(ya[:, 0]) + 0j).real
    lb = rb + np.log(np.abs(yb[:, 0]) + 0j).real
    np.testing.assert_allclose(la, lb, atol=1e-6)


@settings(max_examples=30, deadline=None)
@given(st.floats(-3, 3), st.integers(50, 400))
def test_log_derivative_exact_on_exponentials_in_s(p, n):
    # r^p = e^{p s}; 4th-order stencil error ~ (p h)^4
    g = LogGrid(0.1, 10, n)
    err = g.d_dr(g.nodes**p) - p * g.nodes ** (p - 1)
    assert np.max(np.abs(err / g.nodes ** (p - 1))) < 5 * (abs(p) * g.step) ** 4 + 1e-10


def _backend_in_subprocess(value):
    import os
    import subprocess
    import sys

    env = dict(os.environ, DIRACSECTOR_BACKEND=value)
    return subprocess.run([sys.executable, "-c", "import diracsector._backend as b; print(b.BACKEND)"],
                          env=env, capture_output=True, text=True)


def test_backend_env_flag():
    assert _backend_in_subprocess("numpy").stdout.strip() == "numpy"
    assert _backend_in_subprocess("NUMBA").stdout.strip() == "numba"
    bad = _backend_in_subprocess("cuda")
    assert bad.returncode != 0 and "DIRACSECTOR_BACKEND" in bad.stderr
