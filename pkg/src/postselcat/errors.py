"""Exception hierarchy.

Parameter problems derive from :class:`ValueError`; numerical failures
(truncation, cancellation, quadrature) derive from :class:`NumericalError`.
The CLI maps the two families onto distinct exit codes.
"""


class PostselcatError(Exception):
    pass


class InvalidParameterError(PostselcatError, ValueError):
    pass


class InvalidDimensionError(InvalidParameterError):
    pass


class OrthogonalSelectionError(InvalidParameterError):
    """Pre- and post-selected system states are orthogonal (theta = pi)."""


class NumericalError(PostselcatError, ArithmeticError):
    pass


class TruncationError(NumericalError):
    """The truncated Fock space is too small for the requested quantity."""

    def __init__(self, message: str, tail_mass: float | None = None):
        super().__init__(message)
        self.tail_mass = tail_mass


class NullStateError(NumericalError):
    """A superposition cancelled to (numerically) zero norm."""


class DomainError(NumericalError):
    """A closed-form expression left its domain of validity."""


class QuadratureError(NumericalError):
    pass


class CoverageError(NumericalError):
    """A phase-space grid does not contain the support of the function."""
