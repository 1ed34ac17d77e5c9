"""Problem parameters and the closed-form self-adjointness classification.

Channel ``k`` of the sector of opening ``omega`` carries the spin-orbit
eigenvalue ``lambda_k = (2k+1) pi / (2 omega)``; everything here is decided by
``delta_k = lambda_k**2 - nu**2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .errors import DomainError

TWO_PI = 2.0 * math.pi

#: Absolute tolerance on ``delta`` used when bucketing measure-zero regimes.
REGIME_TOL = 1e-12
#: Distance to an integer below which the deficiency count is flagged.
NEAR_INTEGER_TOL = 1e-9
# omega = 2*pi typed with 15 digits overshoots by a few ulps
_OMEGA_SLACK = 1e-12


class Regime(str, Enum):
    ESA_STRICT = "EssentiallySelfAdjointStrict"
    ESA_BORDERLINE = "EssentiallySelfAdjointBorderline"
    SUBCRITICAL = "Subcritical"
    CRITICAL = "Critical"
    SUPERCRITICAL = "Supercritical"

    @property
    def essentially_self_adjoint(self) -> bool:
        return self in (Regime.ESA_STRICT, Regime.ESA_BORDERLINE)


class Case(str, Enum):
    ESSENTIALLY_SELF_ADJOINT = "EssentiallySelfAdjoint"
    MANY_EXTENSIONS = "ManyExtensions"


class Distinguished(str, Enum):
    UNIQUE = "UniqueDistinguished"
    UNIQUE_LOG_WEIGHT = "UniqueDistinguishedLogWeight"
    NONE = "NoDistinguished"
    NOT_APPLICABLE = "NotApplicable"


def check_omega(omega: float) -> float:
    omega = float(omega)
    if not (math.isfinite(omega) and 0.0 < omega <= TWO_PI + _OMEGA_SLACK):
        raise DomainError(f"omega must lie in (0, 2*pi], got {omega!r}")
    return omega


@dataclass(frozen=True)
class SectorCoupling:
    """Opening angle ``omega``, Coulomb coupling ``nu`` and mass."""

    omega: float
    nu: float
    mass: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "omega", check_omega(self.omega))
        nu = float(self.nu)
        if not math.isfinite(nu):
            raise DomainError(f"nu must be finite, got {self.nu!r}")
        mass = float(self.mass)
        if not (math.isfinite(mass) and mass >= 0.0):
            raise DomainError(f"mass must be finite and >= 0, got {self.mass!r}")
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "mass", mass)


@dataclass(frozen=True)
class ChannelClassification:
    k: int
    lambda_k: float
    delta: float
    regime: Regime


@dataclass(frozen=True)
class DistinguishedReport:
    exists: Distinguished
    weight_exponent_sup: float | None = None


@dataclass(frozen=True)
class GlobalClassification:
    case: Case
    d: int | None
    extension_family_real_dim: int
    hardy_constant: float
    kato_rellich_threshold: float
    kato_rellich_applicable: bool
    distinguished: DistinguishedReport
    sobolev_exponent_sup: float | None
    channels: tuple[ChannelClassification, ...] = ()
    warnings: tuple[str, ...] = field(default=())

    @property
    def deficiency_index(self) -> int:
        return 0 if self.d is None else self.d + 1


def lambda_of(omega: float, k: int) -> float:
    """Spin-orbit eigenvalue of channel ``k``."""
    omega = check_omega(omega)
    if k < 0:
        raise DomainError(f"channel index must be >= 0, got {k}")
    return (2 * k + 1) * math.pi / (2.0 * omega)


def regime_of(delta: float, tol: float = REGIME_TOL) -> Regime:
    if abs(delta - 0.25) <= tol:
        return Regime.ESA_BORDERLINE
    if delta > 0.25:
        return Regime.ESA_STRICT
    if abs(delta) <= tol:
        return Regime.CRITICAL
    if delta > 0.0:
        return Regime.SUBCRITICAL
    return Regime.SUPERCRITICAL


def delta_of(sc: SectorCoupling, k: int) -> ChannelClassification:
    lam = lambda_of(sc.omega, k)
    delta = lam * lam - sc.nu * sc.nu
    return ChannelClassification(k=k, lambda_k=lam, delta=delta, regime=regime_of(delta))


def hardy_constant(omega: float) -> float:
    """Sharp constant of the Dirac-Hardy inequality on the sector."""
    omega = check_omega(omega)
    return (math.pi - omega) ** 2 / (4.0 * omega * omega)


def kato_rellich_threshold(omega: float) -> float:
    """Coupling below which any ``|V| <= nu/|x|`` is a Kato-Rellich perturbation.

    Only meaningful for ``omega < pi``; returned for every angle so reports can
    show it next to the Hardy constant (it is ``<= 0`` when ``omega >= pi``).
    """
    omega = check_omega(omega)
    return (math.pi - omega) / (2.0 * omega)


def deficiency_quantity(sc: SectorCoupling) -> float:
    """``(omega/pi) sqrt(nu^2 + 1/4) - 1/2``; ``d`` is the largest integer below it."""
    return sc.omega / math.pi * math.sqrt(sc.nu * sc.nu + 0.25) - 0.5


def classify(sc: SectorCoupling, max_channels: int = 16) -> GlobalClassification:
    if max_channels < 1:
        raise DomainError(f"max_channels must be >= 1, got {max_channels}")

    channels = [delta_of(sc, k) for k in range(max_channels)]

    # lambda_k increases with k, so the non-ESA channels are exactly 0..d
    n_open = 0
    while True:
        ch = channels[n_open] if n_open < max_channels else delta_of(sc, n_open)
        if ch.regime.essentially_self_adjoint:
            break
        n_open += 1

    warnings = []
    q = deficiency_quantity(sc)
    if abs(q - round(q)) < NEAR_INTEGER_TOL and q > -0.5:
        warnings.append(
            f"deficiency count is near-degenerate: (omega/pi)sqrt(nu^2+1/4)-1/2 = {q!r} "
            "is within 1e-9 of an integer"
        )
    if n_open > max_channels:
        warnings.append(f"{n_open} non-self-adjoint channels exceed max_channels={max_channels}")

    ch0 = channels[0]
    if n_open == 0:
        case, d, family = Case.ESSENTIALLY_SELF_ADJOINT, None, 0
        distinguished = DistinguishedReport(Distinguished.NOT_APPLICABLE)
        sobolev = None
    else:
        case, d = Case.MANY_EXTENSIONS, n_open - 1
        family = n_open * n_open
        if ch0.regime is Regime.SUBCRITICAL:
            sup = 0.5 + math.sqrt(ch0.delta)
            distinguished = DistinguishedReport(Distinguished.UNIQUE, sup)
            sobolev = sup
        elif ch0.regime is Regime.CRITICAL:
            distinguished = DistinguishedReport(Distinguished.UNIQUE_LOG_WEIGHT, 0.5)
            sobolev = 0.5
        else:
            distinguished = DistinguishedReport(Distinguished.NONE)
            sobolev = 0.5

    return GlobalClassification(
        case=case,
        d=d,
        extension_family_real_dim=family,
        hardy_constant=hardy_constant(sc.omega),
        kato_rellich_threshold=kato_rellich_threshold(sc.omega),
        kato_rellich_applicable=sc.omega < math.pi,
        distinguished=distinguished,
        sobolev_exponent_sup=sobolev,
        channels=tuple(channels),
        warnings=tuple(warnings),
    )


def essential_spectrum(mass: float) -> str:
    m = repr(float(mass))
    return f"(-inf, -{m}] U [{m}, +inf)"
