"""Numerical deficiency indices of a radial channel by inward shooting.

Solutions of ``d u = z u`` with ``z = -+ i`` behave like ``e^{-r}`` or ``e^{+r}``
at infinity and like ``r^{+-sqrt(delta)}`` (or ``log r``, or ``r^{+-i mu}``)
at the origin.  We start on the decaying direction at ``r_out`` and integrate
towards ``r_min``; the channel contributes to the deficiency index exactly
when this solution is square integrable at 0, i.e. when its local power law
there beats ``r^{-1/2}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..errors import FitError, SolverError
from ..grid import LogGrid, RadialSample
from ..params import SectorCoupling, delta_of
from . import kernels

R_OUT = 50.0
DEFAULT_SHOOTING_GRID = (1e-12, R_OUT, 2000)
#: Half-width of the undecidable band around exponent -1/2.
FIT_MARGIN = 0.005
RTOL = 1e-10

_J = np.array([[0.0, 1.0], [-1.0, 0.0]])


class Verdict(str, Enum):
    L2 = "L2"
    NOT_L2 = "NotL2"
    INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class FitResult:
    exponent: float
    r_squared: float
    log_flag: bool
    log_exponent: float
    n_points: int
    window: tuple


@dataclass(frozen=True)
class ShootingResult:
    solution: RadialSample
    log_norm: np.ndarray
    fit: FitResult
    verdict: Verdict
    z: complex
    delta: float
    steps_status: int = 0

    @property
    def fitted_exponent(self) -> float:
        return self.fit.exponent

    @property
    def l2_integrable_at_zero(self) -> bool | None:
        if self.verdict is Verdict.INDETERMINATE:
            return None
        return self.verdict is Verdict.L2

    @property
    def index_contribution(self) -> int | None:
        l2 = self.l2_integrable_at_zero
        return None if l2 is None else int(l2)


def _fit_log_power(s, log_norm):
    """Least-squares fits of ``log|u|`` against ``s = log r``.

    Model A is a pure power ``a + b s``; model B adds one power of ``log r``,
    ``a + b s + log|s|``.  The log flag is raised when B explains the data
    markedly better than A.
    """
    n = s.size
    X = np.column_stack([np.ones(n), s])
    coef_a, *_ = np.linalg.lstsq(X, log_norm, rcond=None)
    res_a = log_norm - X @ coef_a
    rss_a = float(res_a @ res_a)
    tss = float(((log_norm - log_norm.mean()) ** 2).sum())
    r2 = 1.0 - rss_a / tss if tss > 0 else 1.0

    y_b = log_norm - np.log(np.abs(s))
    coef_b, *_ = np.linalg.lstsq(X, y_b, rcond=None)
    res_b = y_b - X @ coef_b
    rss_b = float(res_b @ res_b)

    floor = 1e-20 * n * max(1.0, float(np.max(np.abs(log_norm)))) ** 2
    log_flag = rss_a > floor and rss_b < 0.1 * rss_a
    return float(coef_a[1]), r2, log_flag, float(coef_b[1])


def fit_exponent(samples: RadialSample, window: tuple) -> FitResult:
    """Slope of ``log |u(r)|`` versus ``log r`` for nodes inside ``window``."""
    lo, hi = window
    if not 0 < lo < hi:
        raise FitError(f"degenerate window {window!r}")
    mask = samples.grid.restrict_mask(lo, hi)
    if mask.sum() < 20:
        raise FitError(f"window {window!r} holds {int(mask.sum())} nodes; need >= 20")
    norms = samples.norm_pointwise()[mask]
    if np.any(norms == 0) or not np.all(np.isfinite(norms)):
        raise FitError("|u| vanishes or is not finite inside the fit window")
    s = samples.grid.s[mask]
    return _fit_from_log(s, np.log(norms), window)


def _fit_from_log(s, log_norm, window):
    b, r2, flag, b_log = _fit_log_power(s, log_norm)
    return FitResult(exponent=b, r_squared=r2, log_flag=flag, log_exponent=b_log,
                     n_points=int(s.size), window=tuple(window))


def decaying_direction(N, z, r_out):
    """Eigenvector of the frozen matrix ``N/r + z J`` with negative real eigenvalue."""
    A = N / r_out + z * _J
    vals, vecs = np.linalg.eig(A)
    i = int(np.argmin(vals.real))
    if not vals[i].real < 0:
        raise SolverError("no decaying direction at r_out", {"eigenvalues": vals.tolist()})
    return vecs[:, i]


def deficiency_index_numeric(sc: SectorCoupling, k: int, sign: str = "+i",
                             grid: LogGrid | None = None, fit_margin: float = FIT_MARGIN,
                             rtol: float = RTOL) -> ShootingResult:
    """Shoot ``d u = z u`` inward and decide whether the solution is L^2 at 0.

    ``sign="+i"`` probes ``ker(h* + i)`` (``z = -i``), ``"-i"`` probes
    ``ker(h* - i)`` (``z = +i``).
    """
    if sign not in ("+i", "-i"):
        raise ValueError(f"sign must be '+i' or '-i', got {sign!r}")
    z = -1j if sign == "+i" else 1j
    grid = LogGrid(*DEFAULT_SHOOTING_GRID) if grid is None else grid
    ch = delta_of(sc, k)
    N = np.array([[ch.lambda_k, -sc.nu], [sc.nu, -ch.lambda_k]])

    y0 = decaying_direction(N, z, grid.r_max)
    s_desc = grid.s[::-1].copy()
    ys, rho, status = kernels.shoot(N, z, y0, s_desc, rtol=rtol)
    if status != 0:
        reason = "step size underflow" if status == 1 else "step budget exhausted"
        raise SolverError(f"shooting failed: {reason}",
                          {"omega": sc.omega, "nu": sc.nu, "k": k, "status": status})
    ys, rho = ys[::-1], rho[::-1]

    values = ys * np.exp(rho - rho.max())[:, None]
    solution = RadialSample(grid, values)
    window = (10.0 * grid.r_min, 1000.0 * grid.r_min)
    mask = grid.restrict_mask(*window)
    if mask.sum() < 20:
        raise FitError(f"fit window {window!r} holds {int(mask.sum())} nodes; need >= 20")
    fit = _fit_from_log(grid.s[mask], rho[mask] + np.log(np.linalg.norm(ys[mask], axis=1)), window)

    if fit.exponent > -0.5 + fit_margin:
        verdict = Verdict.L2
    elif fit.exponent < -0.5 - fit_margin:
        verdict = Verdict.NOT_L2
    else:
        verdict = Verdict.INDETERMINATE
    return ShootingResult(solution=solution, log_norm=rho, fit=fit, verdict=verdict,
                          z=z, delta=ch.delta)


def analytic_index(sc: SectorCoupling, k: int) -> int:
    return 0 if delta_of(sc, k).regime.essentially_self_adjoint else 1


def deficiency_sweep(tasks, max_workers: int = 1, **kwargs):
    """Map :func:`deficiency_index_numeric` over ``(omega, nu, k)`` triples.

    Tasks share nothing; with ``max_workers > 1`` they run on a thread pool
    (the numba kernels release the GIL).
    """
    def run(task):
        omega, nu, k = task
        return deficiency_index_numeric(SectorCoupling(omega, nu), k, **kwargs)

    if max_workers <= 1:
        return [run(t) for t in tasks]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(run, tasks))
