"""Exception types shared across the package."""


class WindowError(ValueError):
    """Mode window does not fit the sample grid (2K+1 > N)."""


class OrderError(ValueError):
    """Bad derivative or Cesaro order."""


class DimensionError(ValueError):
    pass


class SingularShiftError(ArithmeticError):
    """lambda*I - A is numerically singular."""

    def __init__(self, shift, sigma_min, message=None):
        self.shift = complex(shift)
        self.sigma_min = float(sigma_min)
        super().__init__(
            message
            or f"shifted operator is singular at lambda = {self.shift:.6g} "
            f"(smallest singular value {self.sigma_min:.3e})"
        )


class UnsupportedOperatorError(TypeError):
    pass


class WellPosednessError(RuntimeError):
    """The periodic problem has singular modes in the requested window."""

    def __init__(self, singular_modes, gate=None):
        self.singular_modes = list(singular_modes)
        self.gate = gate
        super().__init__(
            f"periodic problem is not well posed: Delta_k singular for k in {self.singular_modes}"
        )


class SingularSystemError(ArithmeticError):
    pass


class FamilyTooLargeError(ValueError):
    pass


class SchemaError(ValueError):
    """Input file or inline spec does not match the expected schema."""
