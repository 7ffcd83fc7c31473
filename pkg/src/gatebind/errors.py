"""Exception hierarchy.

Two families: :class:`UsageError` for malformed requests (wrong dimension,
bad gate spec) and :class:`NumericalError` for inputs that are well-formed
but fail a numerical check. The CLI maps them to exit codes 1 and 2.
"""


class GateBindError(Exception):
    """Base class for all errors raised by this package."""


class UsageError(GateBindError, ValueError):
    """The request itself is malformed."""


class NumericalError(GateBindError, ArithmeticError):
    """A numerical consistency check failed."""


class BadDim(UsageError):
    pass


class BadSpec(UsageError):
    pass


class BadFactor(UsageError):
    pass


class BadGenerator(UsageError):
    pass


class NotReduced(UsageError):
    pass


class NotUnitary(NumericalError):
    pass


class ImaginaryG2(NumericalError):
    pass


class ImaginaryW(NumericalError):
    pass


class NoConsistentAssignment(NumericalError):
    pass


class ReductionDiverged(NumericalError):
    pass


class UnboundedGate(NumericalError):
    """Raised when a gate binds no local degrees of freedom (eta == 0)."""
