"""Exception types raised by the library.

Every error carries enough context in its message to reproduce the failing
call; the CLI serialises ``str(exc)`` together with the class name.
"""

from __future__ import annotations


class SystolicError(Exception):
    """Base class for all library errors."""


class EmptyInput(SystolicError, ValueError):
    pass


class MalformedSimplex(SystolicError, ValueError):
    pass


class SelfLoop(SystolicError, ValueError):
    pass


class UnknownVertex(SystolicError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown vertex"


class NotAFace(SystolicError, ValueError):
    pass


class NotASurface(SystolicError, ValueError):
    pass


class NotGeodesic(SystolicError, ValueError):
    pass


class NoDiagonal(SystolicError, ValueError):
    pass


class BudgetExhausted(SystolicError, RuntimeError):
    pass


class CapExceeded(SystolicError, RuntimeError):
    pass


class NotEquidistant(SystolicError, ValueError):
    pass


class ProjectionError(SystolicError, ValueError):
    """The projection of a sphere simplex failed; the input is not systolic."""


class EmptyProjection(ProjectionError):
    pass


class NonSimplexProjection(ProjectionError):
    pass


class InsufficientOverlap(SystolicError, ValueError):
    pass


class EmptySphere(SystolicError, ValueError):
    pass


class NotFree(SystolicError, ValueError):
    pass


class StuckComplex(SystolicError, RuntimeError):
    pass


class TooSmall(SystolicError, ValueError):
    pass
