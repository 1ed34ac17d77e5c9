"""Logarithmic half-line grids and two-component radial samples."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .numerics import kernels


@dataclass(frozen=True)
class LogGrid:
    """``n`` geometric nodes from ``r_min`` to ``r_max``.

    Derivatives and integrals are taken in ``s = log r``, where the nodes are
    uniform with spacing :attr:`step`.
    """

    r_min: float
    r_max: float
    n: int
    nodes: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        r_min, r_max, n = float(self.r_min), float(self.r_max), int(self.n)
        if not (r_min > 0.0 and r_max > r_min and math.isfinite(r_max)):
            raise DomainError(f"need 0 < r_min < r_max < inf, got ({r_min}, {r_max})")
        if n < 16:
            raise DomainError(f"LogGrid needs n >= 16, got {n}")
        nodes = np.exp(self.s)
        nodes[0], nodes[-1] = r_min, r_max
        nodes.flags.writeable = False
        object.__setattr__(self, "r_min", r_min)
        object.__setattr__(self, "r_max", r_max)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "nodes", nodes)

    @property
    def s(self) -> np.ndarray:
        return np.linspace(math.log(self.r_min), math.log(self.r_max), self.n)

    @property
    def step(self) -> float:
        return (math.log(self.r_max) - math.log(self.r_min)) / (self.n - 1)

    @property
    def decades(self) -> float:
        return math.log10(self.r_max / self.r_min)

    @property
    def ratio(self) -> float:
        return math.exp(self.step)

    def d_dr(self, values, order=4):
        """Radial derivative ``(1/r) d/ds`` of samples along axis 0."""
        values = np.asarray(values)
        r = self.nodes.reshape((-1,) + (1,) * (values.ndim - 1))
        return kernels.log_derivative(values, self.step, order) / r

    def integrate(self, values):
        """``int f dr`` over the grid span, trapezoid rule in ``s``."""
        values = np.asarray(values)
        r = self.nodes.reshape((-1,) + (1,) * (values.ndim - 1))
        return np.trapezoid(values * r, dx=self.step, axis=0)

    def restrict_mask(self, lo, hi):
        return (self.nodes >= lo) & (self.nodes <= hi)


@dataclass(frozen=True)
class RadialSample:
    """A two-component complex function ``(u1, u2)`` on a :class:`LogGrid`."""

    grid: LogGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=complex)
        if values.shape != (self.grid.n, 2):
            raise DomainError(f"values must have shape ({self.grid.n}, 2), got {values.shape}")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @classmethod
    def from_function(cls, grid: LogGrid, fn) -> "RadialSample":
        """Sample ``fn(r) -> (u1, u2)`` (vectorized over ``r``)."""
        u1, u2 = fn(grid.nodes)
        u1 = np.broadcast_to(np.asarray(u1, dtype=complex), grid.nodes.shape)
        u2 = np.broadcast_to(np.asarray(u2, dtype=complex), grid.nodes.shape)
        return cls(grid, np.column_stack([u1, u2]))

    @property
    def r(self) -> np.ndarray:
        return self.grid.nodes

    @property
    def u1(self) -> np.ndarray:
        return self.values[:, 0]

    @property
    def u2(self) -> np.ndarray:
        return self.values[:, 1]

    def norm_pointwise(self) -> np.ndarray:
        return np.sqrt(np.abs(self.values[:, 0]) ** 2 + np.abs(self.values[:, 1]) ** 2)

    def l2_norm_sq(self) -> float:
        return float(self.grid.integrate(self.norm_pointwise() ** 2))

    def __add__(self, other):
        if other.grid != self.grid:
            raise DomainError("samples live on different grids")
        return RadialSample(self.grid, self.values + other.values)

    def __mul__(self, scalar):
        return RadialSample(self.grid, self.values * scalar)

    __rmul__ = __mul__
