"""Errors raised while building multipliers and checking their properties.

Every error carries a message that can be shown to a CLI user as-is. The CLI maps
these onto exit codes; see cli.py.
"""


class MultiplierError(Exception):
    """Base class for all errors raised by bessel_multipliers."""

    def __init__(self, message):
        self.message = message
        super().__init__(message)

    def __str__(self):
        return self.message


class ShapeError(MultiplierError):
    """Dimensions or lengths of the operands don't fit together."""


class PreconditionError(MultiplierError):
    """A mathematical precondition of an operation doesn't hold.

    For biorthogonality checks, `deviation` holds the largest measured deviation.
    """

    def __init__(self, message, deviation=None):
        self.deviation = deviation
        super().__init__(message)


class SingularMatrixError(MultiplierError):
    """The smallest singular value is at or below the invertibility floor."""

    def __init__(self, message, sigma_min=None):
        self.sigma_min = sigma_min
        super().__init__(message)


class DomainError(MultiplierError):
    """A scalar parameter lies outside its allowed range."""


class NumericalError(MultiplierError):
    """A decomposition failed, an inverse is inaccurate, or an input contains NaN/Inf."""


class InputError(MultiplierError):
    """An input file is malformed."""


class ConfigError(MultiplierError):
    """Tolerance or suite configuration is invalid."""


class UnsupportedModeError(MultiplierError):
    """A perturbation schedule asks for something the sweeps don't support."""
