"""Exception types shared across the package."""

from __future__ import annotations


class IsospecError(Exception):
    """Base class for all errors raised by this package."""


class CapExceeded(IsospecError):
    """A group closure or subgroup search grew past its size cap."""


class NotASubgroup(IsospecError):
    pass


class OrderMismatch(IsospecError):
    pass


class NotSymmetric(IsospecError):
    """A generating multiset is not closed under inverses."""


class NoIntertwiner(IsospecError):
    """The commutant of two coset representations has no invertible element."""


class ShapeMismatch(IsospecError):
    pass


class NotPositiveDefinite(IsospecError):
    pass


class Degenerate(IsospecError):
    pass


class BudgetExceeded(IsospecError):
    """An enumeration produced more vectors than the configured budget."""


class UnknownName(IsospecError):
    pass


class NotPrime(IsospecError):
    pass


class ZeroDiscriminant(IsospecError):
    """The polynomial has a repeated factor."""


class RamifiedPrime(IsospecError):
    pass


class InsufficientCensus(IsospecError):
    pass


class ParseError(IsospecError):
    """Malformed input file; the message carries the line number and token."""

    def __init__(self, message: str, line: int | None = None, token: str | None = None):
        self.line = line
        self.token = token
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)


class InternalConsistencyError(IsospecError, AssertionError):
    """Two independently computed quantities that must agree did not."""
