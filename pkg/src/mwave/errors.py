"""Exception and warning types raised by mwave."""


class MwaveError(Exception):
    pass


class NonAdmissible(MwaveError):
    """Symbol cannot be used as a wavelet (f(0) != 0 or f vanishes identically)."""


class QuadratureFailure(MwaveError):
    pass


class DegenerateSymbol(MwaveError):
    pass


class DimensionMismatch(MwaveError, ValueError):
    pass


class SingularTriangle(MwaveError):
    pass


class NotUnitVector(MwaveError, ValueError):
    pass


class GridTooNarrow(MwaveError):
    pass


class DegenerateFit(MwaveError):
    pass


class TruncationWarning(UserWarning):
    pass


class AliasWarning(UserWarning):
    pass
