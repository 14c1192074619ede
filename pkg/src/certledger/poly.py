"""Dense univariate polynomials with rational coefficients and Sturm root counting.

A polynomial is a tuple of Fractions, lowest degree first, with no trailing
zeros (the zero polynomial is the empty tuple).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Poly = tuple


def poly(coeffs: Iterable) -> Poly:
    c = [Fraction(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def degree(p: Poly) -> int:
    return len(p) - 1


def add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return poly((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n))


def sub(p: Poly, q: Poly) -> Poly:
    return add(p, scale(q, -1))


def scale(p: Poly, k) -> Poly:
    return poly(k * a for a in p)


def mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return poly(out)


def power(p: Poly, k: int) -> Poly:
    out: Poly = (Fraction(1),)
    for _ in range(k):
        out = mul(out, p)
    return out


def product(factors: Sequence[Poly]) -> Poly:
    out: Poly = (Fraction(1),)
    for f in factors:
        out = mul(out, f)
    return out


def derivative(p: Poly) -> Poly:
    return poly(i * p[i] for i in range(1, len(p)))


def evaluate(p: Poly, x) -> Fraction:
    acc = Fraction(0)
    for a in reversed(p):
        acc = acc * x + a
    return acc


def divmod_poly(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    quot = [Fraction(0)] * max(len(p) - len(q) + 1, 0)
    lead = q[-1]
    while len(rem) >= len(q) and rem:
        shift = len(rem) - len(q)
        k = rem[-1] / lead
        quot[shift] = k
        for i, b in enumerate(q):
            rem[shift + i] -= k * b
        rem.pop()
        while rem and rem[-1] == 0:
            rem.pop()
    return poly(quot), poly(rem)


def sturm_chain(p: Poly) -> list[Poly]:
    chain = [p, derivative(p)]
    while chain[-1]:
        _, r = divmod_poly(chain[-2], chain[-1])
        if not r:
            break
        chain.append(scale(r, -1))
    return [c for c in chain if c]


def _variations(chain: Sequence[Poly], x) -> int:
    signs = []
    for c in chain:
        v = evaluate(c, x)
        if v:
            signs.append(v > 0)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(p: Poly, a, b, chain: Sequence[Poly] | None = None) -> int:
    """Number of distinct real roots of ``p`` in the half-open interval ``(a, b]``."""
    chain = sturm_chain(p) if chain is None else chain
    return _variations(chain, a) - _variations(chain, b)


def smallest_root_in(p: Poly, a, b, eps) -> tuple[Fraction, Fraction]:
    """Bracket ``[lo, hi]`` of width at most ``eps`` around the smallest root in ``(a, b]``.

    Raises ``ValueError`` if there is no root there.  An exactly located root
    comes back as ``(r, r)``.
    """
    a, b, eps = Fraction(a), Fraction(b), Fraction(eps)
    chain = sturm_chain(p)
    if count_roots(p, a, b, chain) == 0:
        raise ValueError("no root in the given interval")
    lo, hi = a, b  # smallest root lies in (lo, hi]
    while hi - lo > eps:
        mid = (lo + hi) / 2
        if evaluate(p, mid) == 0 and count_roots(p, lo, mid, chain) == 1:
            return mid, mid
        if count_roots(p, lo, mid, chain) > 0:
            hi = mid
        else:
            lo = mid
    if evaluate(p, hi) == 0 and count_roots(p, lo, hi, chain) == 1:
        return hi, hi
    return lo, hi


def largest_root_in(p: Poly, a, b, eps) -> tuple[Fraction, Fraction]:
    """Bracket of width at most ``eps`` around the largest root in ``[a, b)``."""
    q = poly(((-1) ** i) * c for i, c in enumerate(p))  # q(x) = p(-x)
    lo, hi = smallest_root_in(q, -Fraction(b), -Fraction(a), eps)
    return -hi, -lo
