"""Exception hierarchy shared by every abclab module."""


class ABCLabError(Exception):
    """Base class for all abclab errors."""


class GeometryError(ABCLabError, ValueError):
    """Base class for invalid-geometry errors."""


class NonClosedTrajectory(GeometryError):
    pass


class CenterOnPath(GeometryError):
    pass


class BadDiscretization(GeometryError):
    pass


class EvaluationAtSource(GeometryError):
    pass


class InsideCore(GeometryError):
    pass


class CoreOverlap(GeometryError):
    pass


class CoreApproach(GeometryError):
    pass


class CoreEntry(GeometryError):
    """Raised when an integrated trajectory would enter the fluxon core."""


class SourceInsideShield(GeometryError):
    pass


class EvaluationOnSurface(GeometryError):
    pass


class GeometryViolation(GeometryError):
    pass


class EndpointMismatch(GeometryError):
    pass


class DesynchronizedTrajectories(GeometryError):
    pass


class QuadratureNotConverged(ABCLabError, RuntimeError):
    pass


class ChargeNotConserved(ABCLabError, ValueError):
    pass


class NotNormalized(ABCLabError, ValueError):
    pass


class EmptyGrid(ABCLabError, ValueError):
    pass
