"""Dirac-Coulomb operators on sectors with infinite-mass boundary conditions."""

from .errors import (DiracSectorError, DomainError, FitError, MassError, RegimeError,
                     ResolutionError, SolverError)
from .params import (Case, ChannelClassification, Distinguished, GlobalClassification, Regime,
                     SectorCoupling, classify, delta_of, essential_spectrum, hardy_constant,
                     kato_rellich_threshold, lambda_of)
from .grid import LogGrid, RadialSample
from .angular import AngularGrid, AngularMode, check_mode_identities, eval_mode, gram
from .radial import (RadialExpression, apply_d, boundary_model, critical_identities, eval_u_alpha,
                     zero_mode_residual)
from .numerics.hardy import min_hardy_quotient
from .numerics.shooting import Verdict, deficiency_index_numeric
from .partial_wave import (ChannelCoefficients, PolarField, apply_operator_channelwise, decompose,
                           reconstruct)

__version__ = "0.1.0"
