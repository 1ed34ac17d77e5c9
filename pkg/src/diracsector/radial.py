"""The half-line Dirac-Coulomb expression of one channel and its boundary model.

For channel ``k`` the radial expression is

    d u = ( nu/r u1 - u2' - lam/r u2 ,  u1' - lam/r u1 + nu/r u2 )

Near ``r = 0`` its zero modes behave like ``r^{+-sqrt(delta)}``, ``log r`` or
``r^{+-i sqrt(-delta)}``.  When the channel is not essentially self-adjoint,
the self-adjoint extensions are labelled by ``alpha in [0, pi)`` through the
model function ``u^(alpha)`` built here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, RegimeError
from .grid import LogGrid, RadialSample
from .params import Regime, SectorCoupling, delta_of

ANTIDIAG = np.array([[0.0, 1.0], [1.0, 0.0]])


@dataclass(frozen=True)
class RadialExpression:
    nu: float
    lam: float

    @classmethod
    def of(cls, sc: SectorCoupling, k: int) -> "RadialExpression":
        return cls(sc.nu, delta_of(sc, k).lambda_k)

    @property
    def indicial_matrix(self) -> np.ndarray:
        """``N`` such that ``d u = 0`` reads ``r u' = N u``."""
        return np.array([[self.lam, -self.nu], [self.nu, -self.lam]])


def apply_d(expr: RadialExpression, u: RadialSample, order: int = 4) -> RadialSample:
    r = u.grid.nodes
    du = u.grid.d_dr(u.values, order)
    u1, u2 = u.u1, u.u2
    out = np.column_stack([
        expr.nu / r * u1 - du[:, 1] - expr.lam / r * u2,
        du[:, 0] - expr.lam / r * u1 + expr.nu / r * u2,
    ])
    return RadialSample(u.grid, out)


def apply_d_tilde(lambda_tilde: complex, u: RadialSample, order: int = 4) -> RadialSample:
    """Off-diagonal expression ``(u2' - lt/r u2, -u1' - lt/r u1)``.

    This is the target of the intertwining ``M1 d = d~ M2``; the signs of the
    derivatives are the ones for which the identity holds.
    """
    r = u.grid.nodes
    du = u.grid.d_dr(u.values, order)
    out = np.column_stack([
        du[:, 1] - lambda_tilde / r * u.u2,
        -du[:, 0] - lambda_tilde / r * u.u1,
    ])
    return RadialSample(u.grid, out)


# ---------------------------------------------------------------------------

def chi(r):
    """Smooth cutoff: 1 on ``r <= 1``, 0 on ``r >= 2``, monotone in between.

    Built from ``g(t) = exp(-1/t)`` as ``g(2-r) / (g(2-r) + g(r-1))``.
    """
    r = np.asarray(r, dtype=float)
    a = 2.0 - r
    b = r - 1.0
    with np.errstate(divide="ignore", over="ignore"):
        ga = np.where(a > 0, np.exp(-1.0 / np.where(a > 0, a, 1.0)), 0.0)
        gb = np.where(b > 0, np.exp(-1.0 / np.where(b > 0, b, 1.0)), 0.0)
    return ga / (ga + gb)


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundaryModel:
    k: int
    regime: Regime
    lambda_k: float
    delta: float
    matrix: np.ndarray | None
    root: complex
    m1: np.ndarray
    m2: np.ndarray
    lambda_tilde: complex

    def require_matrix(self) -> np.ndarray:
        if self.matrix is None:
            raise RegimeError(f"channel k={self.k} is {self.regime.value}; no boundary matrix")
        return self.matrix


def _p_matrix(lam, nu, root):
    pref = 1.0 / (2.0 * root * (-lam - root))
    return pref * np.array([[-lam - root, nu], [-nu, lam + root]])


def _q_matrix(lam, nu):
    return np.array([[lam, -nu], [nu, -lam]])


def _r_matrix(lam, nu, mu):
    im = 1j * mu
    pref = 1.0 / (2.0 * im * (-lam - im))
    return pref * np.array([[-lam - im, nu], [-nu, lam + im]], dtype=complex)


def boundary_model(sc: SectorCoupling, k: int) -> BoundaryModel:
    ch = delta_of(sc, k)
    lam, nu, delta = ch.lambda_k, sc.nu, ch.delta

    if ch.regime is Regime.CRITICAL:
        lt = 0.0
    elif delta > 0:
        lt = math.sqrt(delta)
    else:
        lt = 1j * math.sqrt(-delta)
    a = lam + lt
    dtype = complex if isinstance(lt, complex) else float
    m1 = np.array([[nu, a], [a, nu]], dtype=dtype)
    m2 = np.array([[-nu, a], [a, -nu]], dtype=dtype)

    if ch.regime is Regime.SUBCRITICAL:
        root, matrix = complex(lt), _p_matrix(lam, nu, lt)
    elif ch.regime is Regime.CRITICAL:
        root, matrix = 0j, _q_matrix(lam, nu)
    elif ch.regime is Regime.SUPERCRITICAL:
        root, matrix = complex(lt), _r_matrix(lam, nu, math.sqrt(-delta))
    else:
        root, matrix = complex(lt), None

    return BoundaryModel(k=k, regime=ch.regime, lambda_k=lam, delta=delta, matrix=matrix,
                         root=root, m1=m1, m2=m2, lambda_tilde=lt)


def eval_u_alpha(sc: SectorCoupling, k: int, alpha: float, r):
    """Model function ``u^(alpha)(r)``: shape ``(2,)`` for scalar ``r``, else ``(n, 2)``.

    Exactly zero for ``r >= 2`` (cutoff support).
    """
    bm = boundary_model(sc, k)
    M = bm.require_matrix()
    if not 0.0 <= alpha < math.pi:
        raise DomainError(f"alpha must lie in [0, pi), got {alpha!r}")
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr <= 0):
        raise DomainError("r must be positive")
    scalar = r_arr.ndim == 0
    r_arr = np.atleast_1d(r_arr)
    ca, sa = math.cos(alpha), math.sin(alpha)

    if bm.regime is Regime.CRITICAL:
        logr = np.log(r_arr)
        coeff = np.array([ca, sa])
        vec = (M @ coeff)[None, :] * logr[:, None] + coeff[None, :]
    else:
        if bm.regime is Regime.SUBCRITICAL:
            p = bm.root.real
            pair = np.column_stack([ca * r_arr**p, sa * r_arr ** (-p)])
        else:
            mu = bm.root.imag
            phase = mu * np.log(r_arr)
            pair = np.column_stack([ca * np.exp(1j * phase), sa * np.exp(-1j * phase)])
        vec = pair @ M.T
    out = np.asarray(vec, dtype=complex) * chi(r_arr)[:, None]
    out[r_arr >= 2.0] = 0.0
    return out[0] if scalar else out


DEFAULT_ZERO_MODE_GRID = (1e-4, 0.9, 2000)


def zero_mode_grid(n: int | None = None) -> LogGrid:
    lo, hi, default_n = DEFAULT_ZERO_MODE_GRID
    return LogGrid(lo, hi, default_n if n is None else n)


def zero_mode_residual(sc: SectorCoupling, k: int, alpha: float,
                       grid: LogGrid | None = None, order: int = 4) -> float:
    """Scaled residual ``max |r (d u)(r)| / max |u|`` of ``u = u^(alpha)`` on ``grid``.

    The grid must sit inside ``(0, 1)`` where the cutoff is identically one;
    the maximum runs over nodes reached by the centered stencil only.
    """
    grid = zero_mode_grid() if grid is None else grid
    if grid.r_max >= 1.0:
        raise DomainError("zero-mode grid must lie inside (0, 1)")
    expr = RadialExpression.of(sc, k)
    u = RadialSample(grid, eval_u_alpha(sc, k, alpha, grid.nodes))
    du = apply_d(expr, u, order)
    edge = order // 2
    interior = slice(edge, grid.n - edge)
    scaled = grid.nodes[interior, None] * du.values[interior]
    ref = np.max(u.norm_pointwise()[interior])
    return float(np.max(np.abs(scaled)) / ref)


def intertwining_residual(sc: SectorCoupling, k: int, u: RadialSample, order: int = 4) -> float:
    """``max |M1 (d u) - d~ (M2 u)|`` over nodes reached by the centered stencil."""
    bm = boundary_model(sc, k)
    expr = RadialExpression(sc.nu, bm.lambda_k)
    lhs = apply_d(expr, u, order).values @ bm.m1.T
    m2u = RadialSample(u.grid, u.values @ bm.m2.T)
    rhs = apply_d_tilde(bm.lambda_tilde, m2u, order).values
    edge = order // 2
    return float(np.max(np.abs(lhs - rhs)[edge:u.grid.n - edge]))


def critical_identities(sc: SectorCoupling, k: int) -> dict:
    """Max-abs residuals of ``M1 M2``, ``M2 M1``, ``M1 + M2 - 2 lam sigma_1`` and ``Q^2``."""
    bm = boundary_model(sc, k)
    if bm.regime is not Regime.CRITICAL:
        raise RegimeError(f"channel k={k} is {bm.regime.value}, not Critical")
    Q = bm.matrix
    return {
        "m1m2": float(np.max(np.abs(bm.m1 @ bm.m2))),
        "m2m1": float(np.max(np.abs(bm.m2 @ bm.m1))),
        "m1_plus_m2": float(np.max(np.abs(bm.m1 + bm.m2 - 2.0 * bm.lambda_k * ANTIDIAG))),
        "q_squared": float(np.max(np.abs(Q @ Q))),
    }
