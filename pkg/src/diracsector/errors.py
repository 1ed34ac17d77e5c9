class DiracSectorError(Exception):
    pass


class DomainError(DiracSectorError, ValueError):
    """A parameter lies outside the admissible range."""


class RegimeError(DiracSectorError, ValueError):
    """The requested object does not exist in this channel's regime."""


class ResolutionError(DiracSectorError, ValueError):
    """A grid is too coarse or too short for the requested computation."""


class MassError(DiracSectorError, ValueError):
    """The channel decomposition only diagonalizes the massless operator."""


class FitError(DiracSectorError, ValueError):
    """Degenerate data for a power-law fit."""


class SolverError(DiracSectorError, RuntimeError):
    """An eigensolver or ODE integrator failed.

    ``diagnostics`` carries whatever the solver knew at the time of failure.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})
