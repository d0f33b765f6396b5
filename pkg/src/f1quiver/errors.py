"""Exception hierarchy.

Every error carries an ``exit_code`` so the CLI can map failures onto its
documented exit statuses without a lookup table.
"""


class F1QError(Exception):
    # invalid or incompatible input unless a subclass says otherwise
    exit_code = 2


class MalformedInput(F1QError, ValueError):
    exit_code = 2


class DanglingEndpoint(MalformedInput):
    pass


class DuplicateId(MalformedInput):
    pass


class InvalidQuiverMap(F1QError, ValueError):
    pass


class InvalidWinding(F1QError, ValueError):
    pass


class Disconnected(F1QError, ValueError):
    pass


class NotPseudotree(F1QError, ValueError):
    pass


class NotACycle(F1QError, ValueError):
    pass


class CodomainMismatch(F1QError, ValueError):
    pass


class ClosureViolation(F1QError, ValueError):
    pass


class TriangleViolation(F1QError, ValueError):
    pass


class DimTooLarge(F1QError, ValueError):
    pass


class NotASubrep(F1QError, ValueError):
    pass


class NotASubquiver(F1QError, ValueError):
    pass


class ColorCollision(F1QError, ValueError):
    pass


class VertexColorMismatch(F1QError, ValueError):
    pass


class BadParameters(F1QError, ValueError):
    pass


class SameVertex(F1QError, ValueError):
    pass


class InfiniteNiceLength(F1QError, ValueError):
    pass


class NicenessUnverified(F1QError):
    exit_code = 5


class TooLarge(F1QError):
    exit_code = 3


class SizeBudgetExceeded(TooLarge):
    pass


class BadPrime(F1QError, ValueError):
    pass


class NonPolynomialCount(F1QError):
    exit_code = 4


class BaseMismatch(F1QError, ValueError):
    pass


class NotATree(F1QError, ValueError):
    pass


class NotAffine(F1QError, ValueError):
    pass


class UnsupportedQuiver(F1QError, ValueError):
    pass
