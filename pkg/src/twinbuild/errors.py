"""Exception hierarchy.

Every precondition failure raises a subclass of :class:`PreconditionError`;
the command line maps those to exit code 2.
"""


class TwinBuildError(Exception):
    pass


class PreconditionError(TwinBuildError, ValueError):
    pass


class IndexOutOfRange(PreconditionError):
    pass


class InvalidMatrix(PreconditionError):
    pass


class NotSpherical(PreconditionError):
    pass


class MatrixMismatch(PreconditionError):
    pass


class NotParallel(PreconditionError):
    pass


class NotCodistanceOne(PreconditionError):
    pass


class NotPrenilpotent(PreconditionError):
    pass


class RankTooLarge(PreconditionError):
    pass


class NonSphericalTypeRequired(PreconditionError):
    pass


class BoundTooSmall(PreconditionError):
    pass


class SameSign(PreconditionError):
    pass


class BadIndex(PreconditionError):
    pass


class TooLong(PreconditionError):
    pass


class FieldTooSmall(PreconditionError):
    pass


class FieldTooLarge(PreconditionError):
    pass


class GroupTooLarge(PreconditionError):
    pass


class NotFoundInRadius(PreconditionError):
    pass
