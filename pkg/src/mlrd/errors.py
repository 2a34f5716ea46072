"""Exception types shared across the package.

Numerical failures carry the best-effort partial result in ``result``
whenever one exists, so callers can degrade gracefully instead of
recomputing.
"""


class MlrdError(Exception):
    """Base class for all package errors."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class InvalidOrder(MlrdError):
    """A Mittag-Leffler order parameter is outside its domain."""


class NonConvergent(MlrdError):
    """A term cap was exhausted before the stop rule reached tolerance."""


class OverflowRegime(MlrdError):
    """No implemented evaluation regime covers the requested argument."""


class InvalidSymbol(MlrdError):
    """A Laplace-domain symbol violates its ordering/coefficient invariants."""


class CombinatorialBlowup(MlrdError):
    """The multinomial index set exceeded the term budget."""


class OracleNotConverged(MlrdError):
    """An oracle self-convergence check failed."""


class QuadratureFailure(MlrdError):
    """Adaptive quadrature did not reach its tolerance."""


class StepTooCoarse(MlrdError):
    """A time-stepping self-convergence check failed."""


class GridTooCoarse(MlrdError):
    """The spectral tail at the Nyquist mode is not resolved."""
