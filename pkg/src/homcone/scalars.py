"""Scalar backends: double precision and exact rationals.

All element coordinates are plain Python numbers.  Float pipelines carry
``float``; exact pipelines carry ``fractions.Fraction`` (``int`` mixes safely
with both).  The only operations that need to know which backend is active are
square roots and zero tests, both of which live here and are driven by a
:class:`Context`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

from .errors import ExactArithmeticError, ParseError

Scalar = Union[int, float, Fraction]

HALF = Fraction(1, 2)  # exact one-half: Fraction * float degrades to float, so this is safe in both modes


@dataclass(frozen=True)
class Context:
    """Numeric policy for factorization and membership decisions.

    exact    -- use rational arithmetic with exact comparisons
    tol_zero -- a diagonal counts as zero when <= tol_zero * max(1, trace(x))
    tol_rec  -- reconstruction passes when ||x - tt*|| <= tol_rec * max(1, ||x||)
    """

    exact: bool = False
    tol_zero: float = 1e-9
    tol_rec: float = 1e-7

    def __post_init__(self):
        if self.tol_zero <= 0 or self.tol_rec <= 0:
            raise ValueError("tolerances must be positive")


DEFAULT_CONTEXT = Context()


def exact_sqrt(value: Scalar) -> Fraction:
    """Square root of a nonnegative rational, or raise if irrational."""
    q = Fraction(value)
    if q < 0:
        raise ExactArithmeticError(f"square root of negative value {q}")
    rn = math.isqrt(q.numerator)
    rd = math.isqrt(q.denominator)
    if rn * rn != q.numerator or rd * rd != q.denominator:
        raise ExactArithmeticError(
            f"square root of {q} is irrational; exact mode only supports inputs "
            "whose factor stays rational"
        )
    return Fraction(rn, rd)


def sqrt_scalar(value: Scalar, ctx: Context) -> Scalar:
    if ctx.exact:
        return exact_sqrt(value)
    return math.sqrt(float(value))


def reciprocal(value: Scalar) -> Scalar:
    """1/value without losing exactness on rationals."""
    if isinstance(value, float):
        return 1.0 / value
    return Fraction(1, 1) / Fraction(value)


def as_exact(value) -> Fraction:
    """Coerce a parsed JSON value to an exact rational.

    Floats are read through their shortest decimal representation, so 0.1
    becomes 1/10 rather than the binary expansion.
    """
    if isinstance(value, bool):
        raise ParseError(f"expected a number, got {value!r}")
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(str(value))
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"cannot parse rational {value!r}") from exc
    raise ParseError(f"cannot interpret {value!r} as a rational")


def parse_scalar(value, ctx: Context) -> Scalar:
    if ctx.exact:
        return as_exact(value)
    if isinstance(value, str):
        return float(Fraction(value))
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"expected a number, got {value!r}")
    return float(value)


def scalar_to_json(value: Scalar):
    """JSON form: floats stay numbers, exact rationals become 'p/q' strings."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, int):
        return value
    return float(value)
