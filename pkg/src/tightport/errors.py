"""Exception types raised across the package."""

__all__ = [
    "TightportError",
    "DimensionMismatch",
    "NotNormalized",
    "CountMismatch",
    "SymbolOutOfRange",
    "BadPermutation",
    "DimensionTooLarge",
    "NotUnimodular",
    "PeriodicityViolated",
    "DesignInvalid",
    "WeightNotPositive",
    "NoSolution",
    "NotUnitary",
    "NotMaximallyEntangled",
    "NotUnitaryExtraction",
    "NotDensityOperator",
    "SchemeInvalid",
    "ParseError",
]


class TightportError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(TightportError):
    """Array shapes are inconsistent with the requested operation."""


class NotNormalized(TightportError):
    """A vector required to be normalized is not."""


class CountMismatch(TightportError):
    """The number of supplied vectors differs from the space dimension."""


class SymbolOutOfRange(TightportError):
    """A grid entry lies outside the symbol range 0..d-1."""


class BadPermutation(TightportError):
    """A sequence expected to be a permutation of 0..n-1 is not."""


class DimensionTooLarge(TightportError):
    """Exhaustive enumeration was requested beyond its feasible cap."""


class NotUnimodular(TightportError):
    """A phase entry does not have modulus 1."""


class PeriodicityViolated(TightportError):
    """A phase matrix breaks the required periodicity pattern."""


class DesignInvalid(TightportError):
    """A Latin square or Hadamard matrix fails its defining conditions."""


class WeightNotPositive(TightportError):
    """A weight operator is not positive definite."""


class NoSolution(TightportError):
    """A linear solve left a residual too large to accept."""


class NotUnitary(TightportError):
    """A matrix required to be unitary is not."""


class NotMaximallyEntangled(TightportError):
    """A reference vector fails the maximal-entanglement check."""


class NotUnitaryExtraction(TightportError):
    """An operator read off an entangled vector is not unitary."""


class NotDensityOperator(TightportError):
    """A matrix is not Hermitian, positive, and of unit trace."""


class SchemeInvalid(TightportError):
    """A scheme fails the verification its caller requires."""


class ParseError(TightportError):
    """A document cannot be decoded; the message carries the location."""
