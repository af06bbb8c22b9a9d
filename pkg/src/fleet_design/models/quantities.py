"""Exact numeric field types.

Money, time and lengths are :class:`fractions.Fraction` values so that budget,
battery and deadline comparisons never need a tolerance.  In files they are
written as integers when integral, as ``"p/q"`` strings otherwise, and
deadlines may additionally be ``"inf"``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Annotated

from pydantic import AfterValidator, ConfigDict, PlainSerializer, PlainValidator

MODEL_CONFIG = ConfigDict(frozen=True, extra="forbid", arbitrary_types_allowed=True)

INFINITY_TOKENS = frozenset({"inf", "+inf", "infinity", "+infinity"})


def to_rational(value: object) -> Fraction:
    """Coerce ints, decimal floats, ``"p/q"``/decimal strings to a Fraction."""
    if isinstance(value, bool):
        raise ValueError("booleans are not numbers here")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"expected a finite number, got {value!r}")
        # repr() keeps the decimal literal the user wrote (0.1 -> 1/10).
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational number: {value!r}") from exc
    raise ValueError(f"expected a number, got {type(value).__name__}")


def to_time_bound(value: object) -> Fraction | float:
    """Like :func:`to_rational` but also accepts infinity (``"inf"``/``math.inf``)."""
    if isinstance(value, float) and value == math.inf:
        return math.inf
    if isinstance(value, str) and value.strip().lower() in INFINITY_TOKENS:
        return math.inf
    return to_rational(value)


def dump_rational(value: Fraction | float) -> int | str:
    if isinstance(value, float):
        return "inf"
    if value.denominator == 1:
        return value.numerator
    return f"{value.numerator}/{value.denominator}"


def check_labels(values: frozenset[int]) -> frozenset[int]:
    if any(v < 0 for v in values):
        raise ValueError("requirement labels must be non-negative integers")
    return values


def dump_sorted(values: frozenset[int] | frozenset[str]) -> list[int] | list[str]:
    return sorted(values)  # type: ignore[return-value]


Rational = Annotated[
    Fraction,
    PlainValidator(to_rational),
    PlainSerializer(dump_rational, return_type=int | str),
]

TimeBound = Annotated[
    Fraction | float,
    PlainValidator(to_time_bound),
    PlainSerializer(dump_rational, return_type=int | str),
]

LabelSet = Annotated[
    frozenset[int],
    AfterValidator(check_labels),
    PlainSerializer(dump_sorted, return_type=list[int]),
]

ClassSet = Annotated[
    frozenset[str],
    PlainSerializer(dump_sorted, return_type=list[str]),
]
