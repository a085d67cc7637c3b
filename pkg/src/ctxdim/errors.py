"""Exception types shared across the package."""


class CtxdimError(Exception):
    """Base class for all package errors."""


class NotHermitian(CtxdimError):
    pass


class NotDichotomic(CtxdimError):
    pass


class DimensionMismatch(CtxdimError):
    pass


class UnsupportedKind(CtxdimError):
    pass


class UnknownScenario(CtxdimError):
    pass


class BadParameter(CtxdimError):
    pass


class TooManyLabels(CtxdimError):
    pass


class NotCommuting(CtxdimError):
    pass


class WrongDimension(CtxdimError):
    pass


class UnsupportedScenario(CtxdimError):
    pass


class LengthMismatch(CtxdimError):
    pass


class Infeasible(CtxdimError):
    pass


class NotCanonical(CtxdimError):
    pass


class UnsupportedLength(CtxdimError):
    pass


class UnsupportedCombination(CtxdimError):
    pass
