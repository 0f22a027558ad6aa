"""telesum: exact two-term telescoping accelerations of hypergeometric series.

The package derives normalized two-term recurrences for parametrized
hypergeometric sums, composes them by iteration pattern into accelerated
expansions, extracts the accelerated series in standard bracket form, and
confirms every cataloged identity numerically with rigorous error balls.
"""

from .algebra import BigRational, MultiPoly, RationalFunction

__all__ = ["BigRational", "MultiPoly", "RationalFunction"]
__version__ = "0.1.0"
