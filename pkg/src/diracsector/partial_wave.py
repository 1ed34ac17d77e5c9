"""Partial-wave transform of sector fields and the channelwise operator action.

A field is expanded as

    psi(r, theta) = r^{-1/2} sum_k [ u_k^+(r) f_k^+(theta) + u_k^-(r) f_k^-(theta) ]

and, for zero mass, ``(-i sigma.grad + nu/|x|) psi`` has channel coefficients
``d_{nu,k} (u_k^+, u_k^-)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .angular import AngularGrid, mode_table
from .errors import DomainError, MassError
from .grid import LogGrid, RadialSample
from .params import SectorCoupling, check_omega, lambda_of
from .radial import RadialExpression, apply_d


@dataclass(frozen=True)
class PolarField:
    """Spinor samples ``values[i, j, :] = psi(r_i, theta_j)``."""

    grid: LogGrid
    theta: AngularGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=complex)
        shape = (self.grid.n, self.theta.n, 2)
        if values.shape != shape:
            raise DomainError(f"field values must have shape {shape}, got {values.shape}")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def omega(self) -> float:
        return self.theta.omega

    def norm_sq(self) -> float:
        """``int_S |psi|^2 dx`` by tensor quadrature (``dx = r dr dtheta``)."""
        dens = np.sum(np.abs(self.values) ** 2, axis=-1) @ self.theta.weights
        return float(self.grid.integrate(dens * self.grid.nodes))


@dataclass(frozen=True)
class ChannelCoefficients:
    omega: float
    grid: LogGrid
    plus: np.ndarray
    minus: np.ndarray
    tail_energy: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "omega", check_omega(self.omega))
        plus = np.array(self.plus, dtype=complex)
        minus = np.array(self.minus, dtype=complex)
        if plus.ndim != 2 or plus.shape != minus.shape or plus.shape[1] != self.grid.n:
            raise DomainError("plus/minus must both have shape (K, grid.n)")
        plus.flags.writeable = False
        minus.flags.writeable = False
        object.__setattr__(self, "plus", plus)
        object.__setattr__(self, "minus", minus)

    @property
    def K(self) -> int:
        return self.plus.shape[0]

    @classmethod
    def zeros(cls, omega, grid, K):
        z = np.zeros((K, grid.n), dtype=complex)
        return cls(omega, grid, z, z)

    @classmethod
    def from_samples(cls, omega, samples):
        """Build from a list of :class:`RadialSample` holding ``(u_k^+, u_k^-)``."""
        grid = samples[0].grid
        if any(s.grid != grid for s in samples):
            raise DomainError("all channel samples must share one grid")
        return cls(omega, grid, np.array([s.u1 for s in samples]), np.array([s.u2 for s in samples]))

    def sample(self, k: int) -> RadialSample:
        return RadialSample(self.grid, np.column_stack([self.plus[k], self.minus[k]]))

    def norm_sq(self) -> float:
        dens = np.sum(np.abs(self.plus) ** 2 + np.abs(self.minus) ** 2, axis=0)
        return float(self.grid.integrate(dens))

    def __add__(self, other):
        if (other.omega, other.grid, other.K) != (self.omega, self.grid, self.K):
            raise DomainError("incompatible coefficient sets")
        return ChannelCoefficients(self.omega, self.grid, self.plus + other.plus,
                                   self.minus + other.minus)


def _interleaved(table):
    # mode_table orders f_0^+, f_0^-, f_1^+, ...
    return table[0::2], table[1::2]


def decompose(field: PolarField, K: int, check_resolution: bool = True) -> ChannelCoefficients:
    """``u_k^{+-}(r) = sqrt(r) <f_k^{+-}, psi(r, .)>_{L^2(0, omega)}``."""
    if K < 1:
        raise DomainError("K must be >= 1")
    if check_resolution:
        field.theta.check_resolves(K)
    F = mode_table(field.omega, K, field.theta.nodes)
    proj = np.einsum("atc,rtc,t->ar", F.conj(), field.values, field.theta.weights)
    proj *= np.sqrt(field.grid.nodes)[None, :]
    fp, fm = _interleaved(proj)
    coeffs = ChannelCoefficients(field.omega, field.grid, fp, fm)
    tail = field.norm_sq() - coeffs.norm_sq()
    return ChannelCoefficients(field.omega, field.grid, fp, fm, tail_energy=tail)


def reconstruct(coeffs: ChannelCoefficients, theta: AngularGrid) -> PolarField:
    if abs(theta.omega - coeffs.omega) > 1e-12 * coeffs.omega:
        raise DomainError("angular grid and coefficients use different opening angles")
    F = mode_table(coeffs.omega, coeffs.K, theta.nodes)
    fp, fm = _interleaved(F)
    vals = np.einsum("kr,ktc->rtc", coeffs.plus, fp) + np.einsum("kr,ktc->rtc", coeffs.minus, fm)
    vals /= np.sqrt(coeffs.grid.nodes)[:, None, None]
    return PolarField(coeffs.grid, theta, vals)


def apply_operator_channelwise(coeffs: ChannelCoefficients, sc: SectorCoupling,
                               order: int = 4) -> ChannelCoefficients:
    """Channel coefficients of ``(-i sigma.grad + nu/|x|) psi`` (massless only)."""
    if sc.mass != 0.0:
        raise MassError("the partial-wave decomposition does not diagonalize the massive operator")
    if abs(sc.omega - coeffs.omega) > 1e-12 * sc.omega:
        raise DomainError("coupling and coefficients use different opening angles")
    plus, minus = [], []
    for k in range(coeffs.K):
        out = apply_d(RadialExpression(sc.nu, lambda_of(sc.omega, k)), coeffs.sample(k), order)
        plus.append(out.u1)
        minus.append(out.u2)
    return ChannelCoefficients(coeffs.omega, coeffs.grid, np.array(plus), np.array(minus))


# ---------------------------------------------------------------------------
# Independent Cartesian reference: finite differences on the polar grid,
# chain rule to d/dx1, d/dx2, then the Pauli matrices directly.

def cartesian_gradient(field: PolarField):
    """``(d psi/dx1, d psi/dx2)`` by second-order differences in ``(log r, theta)``."""
    if not field.theta.is_uniform:
        raise DomainError("finite-difference reference needs a uniform angular grid")
    r = field.grid.nodes[:, None, None]
    th = field.theta.nodes[None, :, None]
    dpsi_ds = np.gradient(field.values, field.grid.step, axis=0, edge_order=2)
    dpsi_dth = np.gradient(field.values, field.theta.nodes, axis=1, edge_order=2)
    d_r = dpsi_ds / r
    d_t = dpsi_dth / r
    d1 = np.cos(th) * d_r - np.sin(th) * d_t
    d2 = np.sin(th) * d_r + np.cos(th) * d_t
    return d1, d2


SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)


def sigma_grad(field: PolarField) -> np.ndarray:
    """``sigma . grad psi`` via Cartesian finite differences."""
    d1, d2 = cartesian_gradient(field)
    return np.einsum("ij,rtj->rti", SIGMA1, d1) + np.einsum("ij,rtj->rti", SIGMA2, d2)


def dirac_coulomb_fd(field: PolarField, nu: float) -> PolarField:
    """``(-i sigma.grad + nu/|x|) psi`` by finite differences (reference only)."""
    r = field.grid.nodes[:, None, None]
    return PolarField(field.grid, field.theta, -1j * sigma_grad(field) + nu / r * field.values)


def sigma_grad_energy_fd(field: PolarField) -> float:
    """``int_S |sigma.grad psi|^2 dx`` by finite differences and tensor quadrature."""
    g = sigma_grad(field)
    dens = np.sum(np.abs(g) ** 2, axis=-1) @ field.theta.weights
    return float(field.grid.integrate(dens * field.grid.nodes))


def infinite_mass_residual(field: PolarField) -> float:
    """Max of ``|B_n psi - psi|`` on both edges, ``B_n = -i sigma_3 sigma.n``.

    Requires the angular grid to include both edges.
    """
    th = field.theta.nodes
    if th[0] != 0.0 or abs(th[-1] - field.omega) > 1e-12:
        raise DomainError("angular grid must include both edges")
    w = field.omega
    worst = 0.0
    for idx, normal in ((0, (0.0, -1.0)), (-1, (-np.sin(w), np.cos(w)))):
        B = -1j * SIGMA3 @ (normal[0] * SIGMA1 + normal[1] * SIGMA2)
        edge = field.values[:, idx, :]
        worst = max(worst, float(np.max(np.abs(edge @ B.T - edge))))
    return worst
