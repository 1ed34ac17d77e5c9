"""Eigenbasis of the spin-orbit operator ``K = 1/2 - i sigma_3 d/dtheta`` on ``(0, omega)``.

With infinite-mass conditions on both edges the eigenfunctions are

    f_k^+(t) = (e^{ i(l - 1/2) t},  e^{-i(l - 1/2) t}) / sqrt(2 omega)      K f = +l f
    f_k^-(t) = -i (e^{-i(l + 1/2) t}, e^{ i(l + 1/2) t}) / sqrt(2 omega)     K f = -l f

with ``l = lambda_k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ResolutionError
from .params import check_omega, lambda_of

PLUS, MINUS = "+", "-"


def _check_sign(sign):
    if sign not in (PLUS, MINUS):
        raise DomainError(f"sign must be '+' or '-', got {sign!r}")
    return sign


@dataclass(frozen=True)
class AngularMode:
    k: int
    sign: str
    omega: float
    lam: float = field(init=False)

    def __post_init__(self):
        _check_sign(self.sign)
        object.__setattr__(self, "omega", check_omega(self.omega))
        object.__setattr__(self, "lam", lambda_of(self.omega, self.k))

    @property
    def eigenvalue(self) -> float:
        return self.lam if self.sign == PLUS else -self.lam

    def partner(self) -> "AngularMode":
        return AngularMode(self.k, MINUS if self.sign == PLUS else PLUS, self.omega)


@dataclass(frozen=True)
class AngularGrid:
    """Quadrature nodes and weights on ``[0, omega]``."""

    omega: float
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float)
        weights = np.array(self.weights, dtype=float)
        if nodes.ndim != 1 or nodes.shape != weights.shape or nodes.size < 2:
            raise DomainError("nodes and weights must be 1-d arrays of equal length >= 2")
        if np.any(np.diff(nodes) <= 0):
            raise DomainError("angular nodes must be strictly increasing")
        if np.any(weights <= 0):
            raise DomainError("quadrature weights must be positive")
        if nodes[0] < 0 or nodes[-1] > self.omega * (1 + 1e-14):
            raise DomainError("angular nodes must lie in [0, omega]")
        nodes.flags.writeable = False
        weights.flags.writeable = False
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def uniform(cls, omega: float, n: int) -> "AngularGrid":
        """Composite trapezoid rule on ``n`` equispaced nodes including both edges."""
        omega = check_omega(omega)
        if n < 2:
            raise DomainError("need at least 2 angular nodes")
        nodes = np.linspace(0.0, omega, n)
        w = np.full(n, omega / (n - 1))
        w[0] = w[-1] = 0.5 * omega / (n - 1)
        return cls(omega, nodes, w)

    @classmethod
    def gauss(cls, omega: float, n: int) -> "AngularGrid":
        omega = check_omega(omega)
        x, w = np.polynomial.legendre.leggauss(n)
        return cls(omega, 0.5 * omega * (x + 1.0), 0.5 * omega * w)

    @property
    def n(self) -> int:
        return self.nodes.size

    @property
    def is_uniform(self) -> bool:
        d = np.diff(self.nodes)
        return bool(np.allclose(d, d[0], rtol=1e-9, atol=0))

    def nodes_per_period(self, lam: float) -> float:
        """Worst-case node density for ``e^{i(lam + 1/2) theta}``."""
        period = 2.0 * math.pi / (lam + 0.5)
        return period / float(np.max(np.diff(self.nodes)))

    def check_resolves(self, K: int, min_per_period: float = 8.0) -> None:
        lam = lambda_of(self.omega, K - 1)
        got = self.nodes_per_period(lam)
        if got < min_per_period:
            raise ResolutionError(
                f"angular grid has {got:.2f} nodes per period of mode k={K - 1}; "
                f"need >= {min_per_period}"
            )


def eval_mode(mode: AngularMode, theta):
    """Value of the mode at ``theta``: shape ``(2,)`` for scalars, ``(n, 2)`` for arrays."""
    th = np.asarray(theta, dtype=float)
    if np.any(th < 0.0) or np.any(th > mode.omega * (1 + 1e-14)):
        raise DomainError(f"theta must lie in [0, omega={mode.omega}]")
    norm = 1.0 / math.sqrt(2.0 * mode.omega)
    if mode.sign == PLUS:
        phase = (mode.lam - 0.5) * th
        out = norm * np.stack([np.exp(1j * phase), np.exp(-1j * phase)], axis=-1)
    else:
        phase = (mode.lam + 0.5) * th
        out = -1j * norm * np.stack([np.exp(-1j * phase), np.exp(1j * phase)], axis=-1)
    return out


def eval_mode_derivative(mode: AngularMode, theta):
    """Exact ``d/dtheta`` of :func:`eval_mode`."""
    f = eval_mode(mode, theta)
    if mode.sign == PLUS:
        rate = np.array([1j, -1j]) * (mode.lam - 0.5)
    else:
        rate = np.array([-1j, 1j]) * (mode.lam + 0.5)
    return f * rate


def apply_spin_orbit(mode: AngularMode, theta):
    """``K f = f/2 - i sigma_3 f'`` with the derivative taken analytically."""
    f = eval_mode(mode, theta)
    df = eval_mode_derivative(mode, theta)
    sigma3 = np.array([1.0, -1.0])
    return 0.5 * f - 1j * sigma3 * df


def sigma_dot_er(theta):
    """``sigma . e_r`` as an array of shape ``(..., 2, 2)``."""
    th = np.asarray(theta, dtype=float)
    out = np.zeros(th.shape + (2, 2), dtype=complex)
    out[..., 0, 1] = np.exp(-1j * th)
    out[..., 1, 0] = np.exp(1j * th)
    return out


def radial_flip(values, theta):
    """Pointwise ``-i (sigma . e_r) phi`` for spinor samples of shape ``(n, 2)``."""
    return -1j * np.einsum("nij,nj->ni", sigma_dot_er(theta), values)


@dataclass(frozen=True)
class ModeResiduals:
    boundary: float
    eigen: float
    flip: float

    @property
    def max(self) -> float:
        return max(self.boundary, self.eigen, self.flip)


def check_mode_identities(mode: AngularMode, grid: AngularGrid, lam_override=None) -> ModeResiduals:
    """Residuals of the edge conditions, the eigen-equation and the radial flip.

    ``lam_override`` replaces the eigenvalue the eigen-residual is compared to;
    it exists to build negative controls.
    """
    w = mode.omega
    f0 = eval_mode(mode, 0.0)
    fw = eval_mode(mode, w)
    bc = abs(fw[1] + np.exp(1j * w) * fw[0]) + abs(f0[0] - f0[1])

    th = grid.nodes
    lam = mode.lam if lam_override is None else float(lam_override)
    target = lam if mode.sign == PLUS else -lam
    eig = np.max(np.abs(apply_spin_orbit(mode, th) - target * eval_mode(mode, th)))

    sgn = 1.0 if mode.sign == PLUS else -1.0
    flip = np.max(np.abs(radial_flip(eval_mode(mode, th), th) - sgn * eval_mode(mode.partner(), th)))
    return ModeResiduals(float(bc), float(eig), float(flip))


def basis_modes(omega: float, K: int):
    """``f_0^+, f_0^-, ..., f_{K-1}^+, f_{K-1}^-`` in that order."""
    return [AngularMode(k, s, omega) for k in range(K) for s in (PLUS, MINUS)]


def mode_table(omega: float, K: int, theta) -> np.ndarray:
    """Samples of the first ``2K`` modes, shape ``(2K, n_theta, 2)``."""
    return np.stack([eval_mode(m, theta) for m in basis_modes(omega, K)])


def gram(omega: float, K: int, grid: AngularGrid) -> np.ndarray:
    """Quadrature Gram matrix of the first ``2K`` modes (ideally the identity)."""
    omega = check_omega(omega)
    if abs(grid.omega - omega) > 1e-12 * omega:
        raise DomainError("grid and modes use different opening angles")
    grid.check_resolves(K)
    F = mode_table(omega, K, grid.nodes)
    return np.einsum("atc,btc,t->ab", F.conj(), F, grid.weights)
