"""Scalar backends.

Two field implementations are used side by side:

* ``ExactRational`` -- :class:`fractions.Fraction`; every predicate is an
  exact identity.
* ``ApproxReal`` -- ``float``; predicates compare against a single
  scale-relative tolerance ``eps`` (default ``1e-9``, overridable through the
  ``CONIC_NETS_EPS`` environment variable or :func:`tolerance`).

A value's backend is read off its Python type, so the geometric code is
written once and runs on both.  Mixing the two promotes to ``float``.
"""

from __future__ import annotations

import math
import os
from contextlib import contextmanager
from contextvars import ContextVar
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

Scalar = Union[Fraction, float]

EXACT = "exact"
APPROX = "approx"
DEFAULT_EPS = 1e-9

_eps_override: ContextVar[float | None] = ContextVar("conic_nets_eps", default=None)


def get_eps() -> float:
    override = _eps_override.get()
    if override is not None:
        return override
    return float(os.environ.get("CONIC_NETS_EPS", DEFAULT_EPS))


@contextmanager
def tolerance(eps: float) -> Iterator[float]:
    """Temporarily set the ApproxReal tolerance."""
    token = _eps_override.set(float(eps))
    try:
        yield float(eps)
    finally:
        _eps_override.reset(token)


def is_exact(*values) -> bool:
    return all(isinstance(v, (Fraction, int)) and not isinstance(v, bool) for v in values)


def backend_of(values: Iterable) -> str:
    return EXACT if is_exact(*values) else APPROX


def parse_scalar(value) -> Scalar:
    """Parse ``"p/q"``, integers, decimals or numbers into a backend scalar."""
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return value
    if isinstance(value, str):
        text = value.strip()
        if any(ch in text for ch in ".eEnN") and "/" not in text:
            return float(text)
        return Fraction(text)
    raise TypeError(f"cannot interpret {value!r} as a scalar")


def coerce(values: Iterable) -> tuple:
    """Parse values and bring them onto a common backend."""
    parsed = [parse_scalar(v) for v in values]
    if all(isinstance(v, Fraction) for v in parsed):
        return tuple(parsed)
    return tuple(float(v) for v in parsed)


def to_float(values: Iterable) -> tuple:
    return tuple(float(v) for v in values)


def format_scalar(value: Scalar) -> str | float:
    """Serialize: exact values as ``"p/q"`` in lowest terms, floats as numbers."""
    if isinstance(value, Fraction) or isinstance(value, int):
        frac = Fraction(value)
        return f"{frac.numerator}/{frac.denominator}"
    return float(value)


def norm(vector: Sequence) -> float:
    try:
        return math.sqrt(sum(float(v) * float(v) for v in vector))
    except OverflowError:
        return math.inf


def vanishes(value, scale: float = 1.0) -> bool:
    """Zero test: exact for rationals, ``|value| <= eps * scale`` for floats."""
    if is_exact(value):
        return value == 0
    return abs(value) <= get_eps() * scale


def close(a, b, eps: float | None = None) -> bool:
    """Equality of two scalars, relative to their magnitude on ApproxReal."""
    if is_exact(a, b):
        return a == b
    eps = get_eps() if eps is None else eps
    return abs(a - b) <= eps * max(1.0, abs(a), abs(b))


def sign(value, scale: float = 1.0) -> int:
    if vanishes(value, scale):
        return 0
    return 1 if value > 0 else -1


def exact_sqrt(value: Fraction) -> Fraction | None:
    """Square root of a non-negative rational when it is rational, else ``None``."""
    value = Fraction(value)
    if value < 0:
        return None
    num, den = value.numerator, value.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def sqrt(value) -> Scalar | None:
    """Backend-preserving square root; ``None`` when an exact root is irrational."""
    if is_exact(value):
        return exact_sqrt(value)
    return math.sqrt(value)
