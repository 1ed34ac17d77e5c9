"""Hot numeric kernels, each in a numba flavour and a numpy/scipy flavour.

The public names at the bottom dispatch on :data:`diracsector._backend.BACKEND`.
Both flavours stay importable (``numba_kernels`` / ``numpy_kernels``) so the
benchmark and the backend-agreement tests can run them side by side.

Kernels:

* ``log_derivative``    d/ds on a uniform grid, 2nd or 4th order, one-sided ends
* ``hardy_assemble``    P1 element assembly of the radial Hardy forms
* ``tridiag_solve``     symmetric positive-definite tridiagonal solve
* ``shoot``             inward integration of ``du/ds = (N + z e^s J) u`` with
                        per-step renormalisation (log-norm carried separately)
"""

from __future__ import annotations

import math
from types import SimpleNamespace

import numpy as np
import scipy.integrate
import scipy.linalg

from .._backend import BACKEND, njit

# ---------------------------------------------------------------------------
# log_derivative

@njit
def _log_derivative_nb(f, h, order):
    n, m = f.shape
    out = np.empty_like(f)
    if order == 2:
        c = 1.0 / (2.0 * h)
        for j in range(m):
            out[0, j] = (-3.0 * f[0, j] + 4.0 * f[1, j] - f[2, j]) * c
            for i in range(1, n - 1):
                out[i, j] = (f[i + 1, j] - f[i - 1, j]) * c
            out[n - 1, j] = (3.0 * f[n - 1, j] - 4.0 * f[n - 2, j] + f[n - 3, j]) * c
    else:
        c = 1.0 / (12.0 * h)
        for j in range(m):
            out[0, j] = (-25.0 * f[0, j] + 48.0 * f[1, j] - 36.0 * f[2, j]
                         + 16.0 * f[3, j] - 3.0 * f[4, j]) * c
            out[1, j] = (-3.0 * f[0, j] - 10.0 * f[1, j] + 18.0 * f[2, j]
                         - 6.0 * f[3, j] + f[4, j]) * c
            for i in range(2, n - 2):
                out[i, j] = (f[i - 2, j] - 8.0 * f[i - 1, j]
                             + 8.0 * f[i + 1, j] - f[i + 2, j]) * c
            out[n - 2, j] = (3.0 * f[n - 1, j] + 10.0 * f[n - 2, j] - 18.0 * f[n - 3, j]
                             + 6.0 * f[n - 4, j] - f[n - 5, j]) * c
            out[n - 1, j] = (25.0 * f[n - 1, j] - 48.0 * f[n - 2, j] + 36.0 * f[n - 3, j]
                             - 16.0 * f[n - 4, j] + 3.0 * f[n - 5, j]) * c
    return out


def _log_derivative_np(f, h, order):
    out = np.empty_like(f)
    if order == 2:
        out[1:-1] = (f[2:] - f[:-2]) / (2.0 * h)
        out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h)
        out[-1] = (3.0 * f[-1] - 4.0 * f[-2] + f[-3]) / (2.0 * h)
        return out
    c = 1.0 / (12.0 * h)
    out[2:-2] = (f[:-4] - 8.0 * f[1:-3] + 8.0 * f[3:-1] - f[4:]) * c
    out[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * c
    out[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * c
    out[-2] = (3.0 * f[-1] + 10.0 * f[-2] - 18.0 * f[-3] + 6.0 * f[-4] - f[-5]) * c
    out[-1] = (25.0 * f[-1] - 48.0 * f[-2] + 36.0 * f[-3] - 16.0 * f[-4] + 3.0 * f[-5]) * c
    return out


def _wrap_log_derivative(impl):
    def log_derivative(values, h, order=4):
        """Derivative along axis 0 of samples on a uniform grid of spacing ``h``."""
        if order not in (2, 4):
            raise ValueError(f"stencil order must be 2 or 4, got {order}")
        f = np.asarray(values)
        if f.shape[0] < (3 if order == 2 else 5):
            raise ValueError(f"need at least {3 if order == 2 else 5} nodes for order {order}")
        is_real = not np.iscomplexobj(f)
        flat = np.ascontiguousarray(f.reshape(f.shape[0], -1), dtype=complex)
        out = impl(flat, float(h), int(order)).reshape(f.shape)
        return out.real if is_real else out
    return log_derivative


# ---------------------------------------------------------------------------
# hardy_assemble
#
# Form a[w] = int |w' + c w|^2 ds and mass b[w] = int |w|^2 ds over P1 hats on
# nodes s_0..s_{n-1}, Dirichlet at both ends.  Two-point Gauss is exact for the
# quadratic integrands.  Returns (a_diag, a_off, b_diag, b_off) on the n-2
# interior unknowns.

_G = 0.5 / math.sqrt(3.0)


@njit
def _hardy_assemble_nb(s, c):
    n = s.shape[0]
    a_d = np.zeros(n)
    a_o = np.zeros(n - 1)
    b_d = np.zeros(n)
    b_o = np.zeros(n - 1)
    for e in range(n - 1):
        h = s[e + 1] - s[e]
        for t in (0.5 - _G, 0.5 + _G):
            wq = 0.5 * h
            va = 1.0 - t
            vb = t
            ga = -1.0 / h + c * va
            gb = 1.0 / h + c * vb
            a_d[e] += wq * ga * ga
            a_d[e + 1] += wq * gb * gb
            a_o[e] += wq * ga * gb
            b_d[e] += wq * va * va
            b_d[e + 1] += wq * vb * vb
            b_o[e] += wq * va * vb
    return a_d[1:-1].copy(), a_o[1:-1].copy(), b_d[1:-1].copy(), b_o[1:-1].copy()


def _hardy_assemble_np(s, c):
    h = np.diff(s)
    a_d = np.zeros(s.size)
    b_d = np.zeros(s.size)
    a_o = np.zeros(h.size)
    b_o = np.zeros(h.size)
    for t in (0.5 - _G, 0.5 + _G):
        wq = 0.5 * h
        va, vb = 1.0 - t, t
        ga = -1.0 / h + c * va
        gb = 1.0 / h + c * vb
        a_d[:-1] += wq * ga * ga
        a_d[1:] += wq * gb * gb
        a_o += wq * ga * gb
        b_d[:-1] += wq * va * va
        b_d[1:] += wq * vb * vb
        b_o += wq * va * vb
    return a_d[1:-1], a_o[1:-1], b_d[1:-1], b_o[1:-1]


# ---------------------------------------------------------------------------
# tridiag_solve  (LDL^T; a non-positive pivot means "not positive definite")

@njit
def _tridiag_solve_nb(diag, off, rhs):
    n = diag.shape[0]
    d = np.empty(n)
    l = np.empty(max(n - 1, 0))
    d[0] = diag[0]
    if not d[0] > 0.0:
        return rhs * np.nan, 0
    for i in range(1, n):
        l[i - 1] = off[i - 1] / d[i - 1]
        d[i] = diag[i] - l[i - 1] * off[i - 1]
        if not d[i] > 0.0:
            return rhs * np.nan, i
    x = rhs.copy()
    for i in range(1, n):
        x[i] -= l[i - 1] * x[i - 1]
    for i in range(n):
        x[i] /= d[i]
    for i in range(n - 2, -1, -1):
        x[i] -= l[i] * x[i + 1]
    return x, -1


def _tridiag_solve_np(diag, off, rhs):
    ab = np.zeros((2, diag.size))
    ab[0, 1:] = off
    ab[1] = diag
    try:
        return scipy.linalg.solveh_banded(ab, rhs), -1
    except np.linalg.LinAlgError as exc:
        # "leading minor of order k is not positive definite"
        digits = [int(tok) for tok in str(exc).split() if tok.isdigit()]
        return rhs * np.nan, (digits[0] - 1 if digits else 0)


# ---------------------------------------------------------------------------
# shoot
#
# du/ds = A(s) u,  A(s) = N + z e^s J,  J = [[0, 1], [-1, 0]],  s = log r.
# Integrates from s_nodes[0] towards s_nodes[-1] (any direction), landing on
# every node.  Returns unit-norm states y[i] and log-norms rho[i] with
# u(s_i) = exp(rho[i]) y[i].  status: 0 ok, 1 step underflow, 2 too many steps.

# Dormand-Prince 5(4)
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A2 = (1 / 5,)
_A3 = (3 / 40, 9 / 40)
_A4 = (44 / 45, -56 / 15, 32 / 9)
_A5 = (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729)
_A6 = (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656)
_B = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84)
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)


@njit
def _rhs(N, z, s, y0, y1):
    g = z * math.exp(s)
    return (N[0, 0] * y0 + (N[0, 1] + g) * y1,
            (N[1, 0] - g) * y0 + N[1, 1] * y1)


@njit
def _shoot_nb(N, z, y_init, s_nodes, rtol, atol, max_steps):
    n = s_nodes.shape[0]
    ys = np.empty((n, 2), dtype=np.complex128)
    rho = np.empty(n)
    y0 = complex(y_init[0])
    y1 = complex(y_init[1])
    nrm = math.sqrt(abs(y0) ** 2 + abs(y1) ** 2)
    y0 /= nrm
    y1 /= nrm
    logscale = math.log(nrm)
    ys[0, 0] = y0
    ys[0, 1] = y1
    rho[0] = logscale
    s = s_nodes[0]
    span = s_nodes[-1] - s_nodes[0]
    direction = 1.0 if span > 0 else -1.0
    h = direction * min(1e-3, abs(s_nodes[1] - s_nodes[0]))
    steps = 0
    for i in range(1, n):
        target = s_nodes[i]
        while (target - s) * direction > 0.0:
            if steps >= max_steps:
                return ys, rho, 2
            if (s + h - target) * direction > 0.0:
                h = target - s
            k1 = _rhs(N, z, s, y0, y1)
            k2 = _rhs(N, z, s + _C[1] * h,
                      y0 + h * _A2[0] * k1[0],
                      y1 + h * _A2[0] * k1[1])
            k3 = _rhs(N, z, s + _C[2] * h,
                      y0 + h * (_A3[0] * k1[0] + _A3[1] * k2[0]),
                      y1 + h * (_A3[0] * k1[1] + _A3[1] * k2[1]))
            k4 = _rhs(N, z, s + _C[3] * h,
                      y0 + h * (_A4[0] * k1[0] + _A4[1] * k2[0] + _A4[2] * k3[0]),
                      y1 + h * (_A4[0] * k1[1] + _A4[1] * k2[1] + _A4[2] * k3[1]))
            k5 = _rhs(N, z, s + _C[4] * h,
                      y0 + h * (_A5[0] * k1[0] + _A5[1] * k2[0] + _A5[2] * k3[0] + _A5[3] * k4[0]),
                      y1 + h * (_A5[0] * k1[1] + _A5[1] * k2[1] + _A5[2] * k3[1] + _A5[3] * k4[1]))
            k6 = _rhs(N, z, s + h,
                      y0 + h * (_A6[0] * k1[0] + _A6[1] * k2[0] + _A6[2] * k3[0]
                                + _A6[3] * k4[0] + _A6[4] * k5[0]),
                      y1 + h * (_A6[0] * k1[1] + _A6[1] * k2[1] + _A6[2] * k3[1]
                                + _A6[3] * k4[1] + _A6[4] * k5[1]))
            n0 = y0 + h * (_B[0] * k1[0] + _B[2] * k3[0] + _B[3] * k4[0]
                           + _B[4] * k5[0] + _B[5] * k6[0])
            n1 = y1 + h * (_B[0] * k1[1] + _B[2] * k3[1] + _B[3] * k4[1]
                           + _B[4] * k5[1] + _B[5] * k6[1])
            k7 = _rhs(N, z, s + h, n0, n1)
            e0 = h * (_E[0] * k1[0] + _E[2] * k3[0] + _E[3] * k4[0]
                      + _E[4] * k5[0] + _E[5] * k6[0] + _E[6] * k7[0])
            e1 = h * (_E[0] * k1[1] + _E[2] * k3[1] + _E[3] * k4[1]
                      + _E[4] * k5[1] + _E[5] * k6[1] + _E[6] * k7[1])
            sc0 = atol + rtol * max(abs(y0), abs(n0))
            sc1 = atol + rtol * max(abs(y1), abs(n1))
            err = math.sqrt(0.5 * ((abs(e0) / sc0) ** 2 + (abs(e1) / sc1) ** 2))
            steps += 1
            if err <= 1.0:
                s = s + h
                if abs(target - s) <= 1e-13 * max(1.0, abs(target)):
                    s = target
                nrm = math.sqrt(abs(n0) ** 2 + abs(n1) ** 2)
                y0 = n0 / nrm
                y1 = n1 / nrm
                logscale += math.log(nrm)
                fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
            else:
                fac = max(0.2, 0.9 * err ** -0.2)
            h = h * fac
            if abs(h) < 1e-14 * max(1.0, abs(s)):
                return ys, rho, 1
        ys[i, 0] = y0
        ys[i, 1] = y1
        rho[i] = logscale
    return ys, rho, 0


def _shoot_np(N, z, y_init, s_nodes, rtol, atol, max_steps):
    # Same flow written for scipy: integrate the unit direction y and the
    # log-norm rho jointly, so nothing overflows.
    def rhs(s, x):
        y = x[:2]
        g = z * math.exp(s)
        A = np.array([[N[0, 0], N[0, 1] + g], [N[1, 0] - g, N[1, 1]]])
        ay = A @ y
        growth = (np.vdot(y, ay)).real / (np.vdot(y, y)).real
        return np.concatenate([ay - growth * y, [growth]])

    nrm = float(np.linalg.norm(y_init))
    x0 = np.concatenate([np.asarray(y_init, dtype=complex) / nrm, [math.log(nrm)]])
    sol = scipy.integrate.solve_ivp(rhs, (s_nodes[0], s_nodes[-1]), x0, method="DOP853",
                                    t_eval=s_nodes, rtol=rtol, atol=atol)
    n = s_nodes.size
    if not sol.success or sol.y.shape[1] != n:
        status = 1 if "step size" in sol.message.lower() else 2
        return np.full((n, 2), np.nan + 0j), np.full(n, np.nan), status
    y = sol.y[:2].T.copy()
    norms = np.linalg.norm(y, axis=1)
    return y / norms[:, None], sol.y[2].real + np.log(norms), 0


def _wrap_shoot(impl):
    def shoot(N, z, y_init, s_nodes, rtol=1e-10, atol=1e-13, max_steps=2_000_000):
        """Integrate ``du/ds = (N + z e^s J) u`` through ``s_nodes`` (in order)."""
        return impl(np.ascontiguousarray(N, dtype=float), complex(z),
                    np.ascontiguousarray(y_init, dtype=complex),
                    np.ascontiguousarray(s_nodes, dtype=float),
                    float(rtol), float(atol), int(max_steps))
    return shoot


def _wrap_plain(impl):
    def wrapper(*args):
        return impl(*[np.ascontiguousarray(a, dtype=float) if isinstance(a, np.ndarray) else a
                      for a in args])
    wrapper.__name__ = impl.__name__.rsplit("_", 1)[0].lstrip("_")
    return wrapper


numba_kernels = SimpleNamespace(
    name="numba",
    log_derivative=_wrap_log_derivative(_log_derivative_nb),
    hardy_assemble=_wrap_plain(_hardy_assemble_nb),
    tridiag_solve=_wrap_plain(_tridiag_solve_nb),
    shoot=_wrap_shoot(_shoot_nb),
)

numpy_kernels = SimpleNamespace(
    name="numpy",
    log_derivative=_wrap_log_derivative(_log_derivative_np),
    hardy_assemble=_wrap_plain(_hardy_assemble_np),
    tridiag_solve=_wrap_plain(_tridiag_solve_np),
    shoot=_wrap_shoot(_shoot_np),
)

active = numba_kernels if BACKEND == "numba" else numpy_kernels

log_derivative = active.log_derivative
hardy_assemble = active.hardy_assemble
tridiag_solve = active.tridiag_solve
shoot = active.shoot
