"""Periodic solutions of z''' = Az + f by per-mode resolvent solves, with well-posedness diagnostics."""

__version__ = "0.1.0"

from .errors import (
    SingularShiftError,
    SingularSystemError,
    WellPosednessError,
    WindowError,
)
from .diagnosis import diagnose
from .forcing import forcing_catalog
from .multiplier import (
    decay_estimate,
    mode_symbol,
    r_bound_estimate,
    symbol_family,
    telescoping_check,
)
from .operators import (
    LinearOperator,
    dense_operator,
    diagonal_operator,
    dirichlet_laplacian,
    operator_from_spec,
    scalar_operator,
    tridiagonal_operator,
)
from .solver import solve_periodic, spectrum_gate
from .spectra import (
    PeriodicSignal,
    SpectralCoefficients,
    dft,
    fejer_sum,
    spectral_derivative,
    synthesize,
)
