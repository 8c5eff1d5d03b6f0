from __future__ import annotations


class MetronoidError(Exception):
    """Base class for every error raised by the package."""


class DimensionMismatchError(MetronoidError, ValueError):
    pass


class DegenerateBodyError(MetronoidError, ValueError):
    """Origin not interior, deficient span, or a zero direction."""


class SingularMapError(MetronoidError, ValueError):
    pass


class MassError(MetronoidError, ValueError):
    pass


class PreconditionError(MetronoidError, ValueError):
    pass


class SamplingError(MetronoidError, RuntimeError):
    pass


class UnsupportedPairError(MetronoidError, LookupError):
    pass


class MeasureParseError(MetronoidError, ValueError):
    pass


class SearchFailedError(MetronoidError, RuntimeError):
    pass


class LpError(MetronoidError, ArithmeticError):
    pass


class LpSingularBasisError(LpError):
    def __init__(self, condition: float) -> None:
        self.condition = condition
        super().__init__(f"numerically singular basis (condition number {condition:.3e})")
