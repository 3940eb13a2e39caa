"""Exception types shared across the package."""


class BentkitError(Exception):
    """Base class for all errors raised by this package."""


# linear algebra
class DimensionMismatch(BentkitError):
    pass


class NotContained(BentkitError):
    pass


class DegenerateInnerProduct(BentkitError):
    """The dot product restricted to a subspace is degenerate (only possible over a prime field)."""


# graded complexes
class ShapeMismatch(BentkitError):
    pass


class NotHomogeneous(BentkitError):
    pass


class NotSquareZero(BentkitError):
    pass


class NotChainMap(BentkitError):
    pass


# exact couples and spectral sequences
class NotExact(BentkitError):
    pass


class NotSubcomplex(BentkitError):
    pass


class LiftFailure(BentkitError):
    pass


class NotConvergentCase(BentkitError):
    pass


# bent complexes
class InvalidProfile(BentkitError):
    pass


class NotLargeSurgery(BentkitError):
    pass


class ClassInconsistency(BentkitError):
    pass


# knots
class NotSymmetrizable(BentkitError):
    pass


class UnitValueViolation(BentkitError):
    pass


class NotGenusOne(BentkitError):
    pass


class PreconditionViolated(BentkitError):
    pass


class InvalidCase(BentkitError):
    pass


class BadSlope(BentkitError):
    pass


class NotApplicable(BentkitError):
    pass


class UnknownKnot(BentkitError):
    pass


# input formats
class SchemaError(BentkitError):
    pass
