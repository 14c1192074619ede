"""Exact rationals and rational-endpoint interval arithmetic.

Every scalar in a certificate is a :class:`fractions.Fraction`.  Intervals
(:class:`Enclosure`) carry exact rational endpoints; no floating point value
ever enters a result.  Endpoints whose denominators grow past a fixed size are
rounded outward onto a dyadic grid, which keeps the numbers small while
preserving containment.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

Number = Union[int, Fraction]

# Denominators above this many bits are rounded outward onto a 2**-GRID_BITS grid.
_MAX_DEN_BITS = 320
_GRID_BITS = 256


class DomainError(ValueError):
    """An operation was applied outside its mathematical domain."""


class IntervalDivisionError(ZeroDivisionError):
    """Division by an enclosure that contains zero."""


def rat(value: Union[str, int, Fraction]) -> Fraction:
    """Parse an exact rational from an int, a Fraction, ``"p/q"`` or a decimal string.

    Decimal strings are read exactly, so ``rat("5.9999") == Fraction(59999, 10000)``.
    Floats are rejected on purpose.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip().replace("_", "")
        try:
            return Fraction(text)
        except ValueError as exc:
            raise ValueError(f"not an exact rational literal: {value!r}") from exc
    raise TypeError(f"refusing to convert {type(value).__name__} to an exact rational")


def fmt(x: Fraction) -> str:
    """Exact ``p/q`` (or ``p``) rendering."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def decimal_str(x: Fraction, digits: int = 12) -> str:
    """Deterministic decimal rendering of ``x`` truncated toward zero."""
    x = Fraction(x)
    sign = "-" if x < 0 else ""
    x = abs(x)
    scaled = x.numerator * 10**digits // x.denominator
    whole, frac = divmod(scaled, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


def _floor_to_grid(x: Fraction) -> Fraction:
    scale = 1 << _GRID_BITS
    return Fraction((x.numerator * scale) // x.denominator, scale)


def _ceil_to_grid(x: Fraction) -> Fraction:
    scale = 1 << _GRID_BITS
    return Fraction(-((-x.numerator * scale) // x.denominator), scale)


def _tame_lo(x: Fraction) -> Fraction:
    return _floor_to_grid(x) if x.denominator.bit_length() > _MAX_DEN_BITS else x


def _tame_hi(x: Fraction) -> Fraction:
    return _ceil_to_grid(x) if x.denominator.bit_length() > _MAX_DEN_BITS else x


class Sign(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    ZERO = "zero"
    UNKNOWN = "unknown"


@dataclass(frozen=True, slots=True)
class Enclosure:
    """Closed interval ``[lo, hi]`` with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        lo, hi = Fraction(self.lo), Fraction(self.hi)
        if lo > hi:
            raise ValueError(f"empty enclosure [{fmt(lo)}, {fmt(hi)}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x: Number | str) -> "Enclosure":
        x = rat(x)
        return cls(x, x)

    @classmethod
    def of(cls, x: "Enclosure | Number | str | tuple") -> "Enclosure":
        """Coerce a point, a ``(lo, hi)`` pair or an Enclosure."""
        if isinstance(x, Enclosure):
            return x
        if isinstance(x, tuple):
            lo, hi = x
            return cls(rat(lo), rat(hi))
        return cls.point(x)

    @classmethod
    def _rounded(cls, lo: Fraction, hi: Fraction) -> "Enclosure":
        return cls(_tame_lo(lo), _tame_hi(hi))

    # -- queries ---------------------------------------------------------
    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x: Number) -> bool:
        return self.lo <= x <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def subset_of(self, other: "Enclosure") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def hull(self, other: "Enclosure") -> "Enclosure":
        return Enclosure(min(self.lo, other.lo), max(self.hi, other.hi))

    def sign(self) -> Sign:
        return certify_sign(self)

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        o = _coerce(other)
        return Enclosure._rounded(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        return Enclosure._rounded(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __neg__(self):
        return Enclosure(-self.hi, -self.lo)

    def __mul__(self, other):
        o = _coerce(other)
        if self.is_point() and o.is_point():
            p = self.lo * o.lo
            return Enclosure._rounded(p, p)
        prods = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Enclosure._rounded(min(prods), max(prods))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        if o.contains_zero():
            raise IntervalDivisionError(f"division by an enclosure containing zero: {o}")
        return self * Enclosure._rounded(1 / o.hi, 1 / o.lo)

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("only integer powers are supported")
        if k < 0:
            return Enclosure.point(1) / (self**-k)
        if k == 0:
            return Enclosure.point(1)
        a, b = self.lo**k, self.hi**k
        if k % 2 == 1 or self.lo >= 0:
            return Enclosure._rounded(a, b)
        if self.hi <= 0:
            return Enclosure._rounded(b, a)
        return Enclosure._rounded(Fraction(0), max(a, b))

    def __str__(self) -> str:
        if self.is_point():
            return f"[{fmt(self.lo)}]"
        return f"[{fmt(self.lo)}, {fmt(self.hi)}]"


def _coerce(x) -> Enclosure:
    if isinstance(x, Enclosure):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return Enclosure.point(x)
    raise TypeError(f"cannot combine Enclosure with {type(x).__name__}")


def emin(a: Enclosure, b: Enclosure) -> Enclosure:
    return Enclosure(min(a.lo, b.lo), min(a.hi, b.hi))


def emax(a: Enclosure, b: Enclosure) -> Enclosure:
    return Enclosure(max(a.lo, b.lo), max(a.hi, b.hi))


def certify_sign(e: Enclosure) -> Sign:
    if e.lo > 0:
        return Sign.POSITIVE
    if e.hi < 0:
        return Sign.NEGATIVE
    if e.lo == 0 and e.hi == 0:
        return Sign.ZERO
    return Sign.UNKNOWN


def iroot(k: int, n: int) -> int:
    """Floor of the real n-th root of a nonnegative integer, by bisection on integers."""
    if k < 0:
        raise DomainError("integer root of a negative number")
    if k < 2:
        return k
    lo, hi = 1, 1 << (k.bit_length() // n + 1)
    # invariant: lo**n <= k < hi**n
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mid**n <= k:
            lo = mid
        else:
            hi = mid
    return lo


def _exact_root(x: Fraction, n: int) -> Fraction | None:
    p, q = x.numerator, x.denominator
    rp, rq = iroot(p, n), iroot(q, n)
    if rp**n == p and rq**n == q:
        return Fraction(rp, rq)
    return None


@lru_cache(maxsize=4096)
def nth_root(x: Fraction, n: int, eps: Fraction) -> Enclosure:
    """Enclosure ``[lo, hi]`` with ``lo**n <= x <= hi**n`` and width at most ``eps``.

    Perfect n-th powers of rationals come back as exact points.  Otherwise the
    root is located by integer bisection on a dyadic grid of spacing ``<= eps``.
    """
    x, eps = Fraction(x), Fraction(eps)
    if n < 1:
        raise DomainError("root index must be a positive integer")
    if x < 0:
        raise DomainError(f"{n}-th root of negative number {fmt(x)}")
    if eps <= 0:
        raise DomainError("eps must be positive")
    exact = _exact_root(x, n)
    if exact is not None:
        return Enclosure(exact, exact)
    bits = 0
    while Fraction(1, 1 << bits) > eps:
        bits += 1
    scale = 1 << bits
    # a**n <= floor(x * scale**n) <= x * scale**n < (a+1)**n
    a = iroot((x.numerator * scale**n) // x.denominator, n)
    return Enclosure(Fraction(a, scale), Fraction(a + 1, scale))


def root_enclosure(x: Enclosure, n: int, eps: Fraction) -> Enclosure:
    """Enclosure of the n-th root over every point of ``x``."""
    if x.lo < 0:
        raise DomainError(f"{n}-th root of an enclosure reaching below zero: {x}")
    return Enclosure(nth_root(x.lo, n, eps).lo, nth_root(x.hi, n, eps).hi)


def refine_until_signed(compute, eps: Fraction, rounds: int = 40) -> tuple[Sign, Enclosure]:
    """Re-evaluate ``compute(eps)`` with halving ``eps`` until the sign is certain."""
    eps = Fraction(eps)
    enc = compute(eps)
    for _ in range(rounds):
        s = certify_sign(enc)
        if s is not Sign.UNKNOWN or enc.is_point():
            return s, enc
        eps /= 2
        enc = compute(eps)
    return certify_sign(enc), enc
