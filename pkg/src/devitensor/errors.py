"""Exception hierarchy.

Every error raised by the library derives from :class:`DevitensorError`.
:class:`ValidationError` covers bad input (the CLI maps it to exit code 1),
:class:`NumericalError` covers algorithmic failures on valid input (exit
code 2).
"""


class DevitensorError(Exception):
    """Base class for all library errors."""


class ValidationError(DevitensorError, ValueError):
    """Input violates a precondition."""


class NumericalError(DevitensorError, ArithmeticError):
    """A numerical procedure failed on otherwise valid input."""


class OrderOverflow(ValidationError):
    pass


class OrderUnderflow(ValidationError):
    pass


class InvalidSlots(ValidationError):
    pass


class NotOrthogonal(ValidationError):
    pass


class NotSymmetric(ValidationError):
    pass


class NotTotallySymmetric(ValidationError):
    pass


class NotADeviator(ValidationError):
    pass


class SymmetryViolation(ValidationError):
    """Minor/major symmetry of a fourth-order tensor is violated.

    ``index`` holds the worst offending index quadruple (0-based) and
    ``residual`` the corresponding absolute deviation.
    """

    def __init__(self, message, index=None, residual=None):
        super().__init__(message)
        self.index = index
        self.residual = residual


class NotInImage(ValidationError):
    pass


class UnsupportedOrder(ValidationError):
    pass


class DegenerateSpectrum(ValidationError):
    pass


class ZeroPolynomial(ValidationError):
    pass


class NonPositiveCompliance(ValidationError):
    pass


class ParseError(ValidationError):
    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + loc)
        self.line = line
        self.column = column


class DimensionError(ValidationError):
    pass


class NoConvergence(NumericalError):
    pass


class PairingFailure(NumericalError):
    pass


class ReconstructionFailure(NumericalError):
    pass


class ConfigurationAmbiguous(NumericalError):
    pass
