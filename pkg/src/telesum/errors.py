"""Exception hierarchy shared across the package."""

from __future__ import annotations


class TelesumError(Exception):
    """Base class for all package-specific errors."""


class DivisionByZero(TelesumError, ZeroDivisionError):
    pass


class UnknownSymbol(TelesumError, ValueError):
    pass


class IrreducibleRemainder(TelesumError):
    """A polynomial could not be fully split into rational linear factors.

    Carries the unfactored cofactor (dense coefficient tuple, ascending).
    """

    def __init__(self, cofactor):
        self.cofactor = cofactor
        super().__init__(f"no rational linear factorization: {cofactor}")


class NonIntegerShift(TelesumError, ValueError):
    """A shift ratio would require a non-integer Gamma offset."""


class TemplateSyntaxError(TelesumError, ValueError):
    """DSL text does not conform to the grammar; carries a position."""

    def __init__(self, message: str, pos: int):
        self.pos = pos
        super().__init__(f"{message} (at position {pos})")


class NotSummable(TelesumError):
    """Gosper's equation has no polynomial solution."""


class NoOrderOneRecurrence(TelesumError):
    """Parameterized telescoping found no order-1 recurrence."""


class BoundaryNotVanishing(TelesumError):
    """Numeric probes show the telescoped boundary term does not decay."""


class MissingStep(TelesumError, ValueError):
    """A composition pattern names a direction with no step recurrence."""


class PoleOnOrbit(TelesumError):
    """A step denominator vanishes at a lattice point; carries the index."""

    def __init__(self, index: int, what: str = ""):
        self.index = index
        super().__init__(f"pole on acceleration orbit at step {index} {what}".rstrip())


class ExtractionFailure(TelesumError):
    """The step ratio cannot be written in standard bracket form."""


class Divergent(TelesumError):
    """The series fails its convergence guard."""


class PoleInTerms(TelesumError):
    """A term of the series is undefined (lower factor hits a pole)."""


class DomainError(TelesumError):
    """Even root of a provably negative value, or similar."""


class CatalogParseError(TelesumError, ValueError):
    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(f"line {line}: {message}")


class DuplicateId(TelesumError, ValueError):
    pass


class UnsupportedEntry(TelesumError):
    """Operation needs template+params but the entry is display-only."""
