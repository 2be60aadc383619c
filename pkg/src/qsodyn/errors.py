"""Exception types shared across the package.

Everything derives from :class:`QsoError`, which is itself a ``ValueError``,
so callers that do not care about the fine-grained type can catch either.
"""


class QsoError(ValueError):
    """Base class for all domain errors raised by this package."""


# --- simplex points ---------------------------------------------------------

class EmptyVector(QsoError):
    pass


class NegativeCoordinate(QsoError):
    pass


class SumOutOfRange(QsoError):
    pass


# --- permutations -----------------------------------------------------------

class RepeatedSymbol(QsoError):
    pass


class SymbolOutOfRange(QsoError):
    pass


class MalformedSyntax(QsoError):
    pass


class IndexOutOfRange(QsoError):
    pass


# --- coefficient tensors ----------------------------------------------------

class NegativeCoefficient(QsoError):
    pass


class RowSumNotOne(QsoError):
    pass


class AsymmetricInput(QsoError):
    pass


class DimensionMismatch(QsoError):
    pass


class WeightOutOfRange(QsoError):
    pass


# --- operator families ------------------------------------------------------

class DimensionTooSmall(QsoError):
    pass


class PermutationSizeMismatch(QsoError):
    pass


class UnknownFamily(QsoError):
    pass


class MissingParameter(QsoError):
    pass


class UnexpectedParameter(QsoError):
    pass


# --- scalar maps ------------------------------------------------------------

class DomainViolation(QsoError):
    pass


# --- analysis ---------------------------------------------------------------

class NotAFixedPoint(QsoError):
    pass


class InsufficientTail(QsoError):
    pass


class InapplicableFunction(QsoError):
    pass


class InapplicableSet(QsoError):
    pass


class NeverEntersRegion(QsoError):
    pass
