"""The base-field scalar: arbitrary-precision rationals.

Everything in the package computes over the rational field, so equality
of results is exact and no tolerances exist anywhere.  ``Scalar`` is the
single type used for structure constants, matrix entries and root values.
"""

from __future__ import annotations

from fractions import Fraction

Scalar = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def rat(value) -> Scalar:
    """Coerce an int, string like ``"-3/4"`` or Scalar into a Scalar."""
    if isinstance(value, Scalar):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass ints, strings or Fractions")
    return Fraction(value)
