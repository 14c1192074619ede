"""Macaulay coefficients, the piecewise length bound h(t, r), and the volume chain.

The volume chain runs: a cubic lower bound ``vol_lower(gamma)`` for the volume
of the restricted system, its largest root ``eta_prime``, the bound
``f(eta, def)`` on the deficit ratio, and ``g(def) = f(eta_prime(s, def), def)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import poly as P
from .bounds import SIGMA
from .certify import Box, Certificate, Direction, certify_inf_above, certify_sup_below
from .exact import DomainError, Enclosure, fmt, rat
from .expr import DEFAULT_EPS, Expr, ExprLike, Var, as_expr, diff, evaluate, piecewise

S_MAX = rat("0.11")
DEF_LO = rat("1.63")
DEF_HI = Fraction(5, 3)


# ---------------------------------------------------------------------------
# Macaulay representation


def binom(i: int, j: int) -> int:
    """Binomial coefficient with ``C(i, j) = 0`` whenever ``i < j`` (including negative ``i``)."""
    if j < 0:
        raise ValueError("lower index must be nonnegative")
    if i < j:
        return 0
    return math.comb(i, j)


@dataclass(frozen=True)
class MacaulayRep:
    """``alpha = sum_i C(c(i), i)`` with ``c(d) > c(d-1) > ... > c(1) >= 0``; ``coeffs`` lists ``c(d)`` first."""

    d: int
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.d:
            raise ValueError("need exactly d coefficients")
        if any(a <= b for a, b in zip(self.coeffs, self.coeffs[1:])) or self.coeffs[-1] < 0:
            raise ValueError(f"coefficients must strictly decrease to >= 0: {self.coeffs}")

    def value(self) -> int:
        return sum(binom(c, self.d - k) for k, c in enumerate(self.coeffs))


def macaulay_decompose(alpha: int, d: int) -> MacaulayRep:
    if alpha < 1 or d < 1:
        raise ValueError("need alpha >= 1 and d >= 1")
    coeffs = []
    rest = alpha
    for i in range(d, 0, -1):
        if rest == 0:
            coeffs.append(i - 1)  # forced: C(c, i) = 0 needs c < i, and the tail must keep decreasing
            continue
        c = i
        while binom(c + 1, i) <= rest:
            c += 1
        coeffs.append(c)
        rest -= binom(c, i)
    return MacaulayRep(d, tuple(coeffs))


def macaulay_shift(rep: MacaulayRep) -> int:
    return sum(binom(c - 1, rep.d - k) if c >= 1 else 0 for k, c in enumerate(rep.coeffs))


# ---------------------------------------------------------------------------
# piecewise length bounds


def h_lower_expr(t: ExprLike, r: ExprLike) -> Expr:
    t, r = as_expr(t), as_expr(r)
    return piecewise(
        (4 * t * r - 8 * r**2, [t - 4 * r]),
        (8 * r**2 - (t - 4 * r) ** 2, [4 * r - t, t - 2 * r]),
        (4 * r**2 - 3 * (t - 2 * r) ** 2, [2 * r - t, t - Fraction(4, 3) * r]),
        (Fraction(3, 2) * t**2, [Fraction(4, 3) * r - t]),
    )


def h_lower(t, r) -> Enclosure:
    t, r = Enclosure.of(t), Enclosure.of(r)
    if t.lo < 0 or r.lo < 0:
        raise DomainError("h(t, r) needs t >= 0 and r >= 0")
    return evaluate(h_lower_expr(Var("t"), Var("r")), {"t": t, "r": r})


def h_cartier_lower(t, r, a, m_prime: int, n: int) -> Enclosure:
    t, r, a = Enclosure.of(t), Enclosure.of(r), Enclosure.of(a)
    if m_prime < 1 or n < 2:
        raise DomainError("need m' >= 1 and n >= 2")
    gap = t - a * r
    if gap.hi < 0:
        raise DomainError("the Cartier bound needs t >= a*r")
    gap = Enclosure(max(gap.lo, Fraction(0)), gap.hi)
    return Enclosure.point(m_prime) * r * gap ** (n - 2) / math.factorial(n - 2)


# ---------------------------------------------------------------------------
# volume chain


@dataclass(frozen=True)
class VolParams:
    s: Enclosure
    deficit: Enclosure
    sigma: Fraction = SIGMA

    def __post_init__(self):
        object.__setattr__(self, "s", Enclosure.of(self.s))
        object.__setattr__(self, "deficit", Enclosure.of(self.deficit))
        object.__setattr__(self, "sigma", rat(self.sigma))


def vol_lower_expr(gamma: ExprLike, s: ExprLike, deficit: ExprLike, sigma: ExprLike = SIGMA) -> Expr:
    g, s, df, sigma = as_expr(gamma), as_expr(s), as_expr(deficit), as_expr(sigma)
    w = 1 - s
    return (sigma - 5 + df) ** 3 - 3 * g**3 + 4 * w**2 * (g - df) - ((g - 2 * w) ** 3 - (df - 2 * w) ** 3)


def _vol_env(gamma, p: VolParams) -> dict:
    return {"gamma": Enclosure.of(gamma), "s": p.s, "def": p.deficit}


_VOL = vol_lower_expr(Var("gamma"), Var("s"), Var("def"))


def vol_lower(gamma, p: VolParams) -> Enclosure:
    gamma = Enclosure.of(gamma)
    if gamma.hi < p.deficit.lo:
        raise DomainError("vol_lower needs gamma >= def")
    return evaluate(vol_lower_expr(Var("gamma"), Var("s"), Var("def"), p.sigma), _vol_env(gamma, p))


def vol_poly(s, deficit, sigma=SIGMA) -> P.Poly:
    """``vol_lower`` as an exact polynomial in gamma for rational ``s`` and ``def``."""
    s, df, sigma = rat(s), rat(deficit), rat(sigma)
    w = 1 - s
    const = (sigma - 5 + df) ** 3 - 4 * w**2 * df + (df - 2 * w) ** 3
    cube = P.power(P.poly([-2 * w, 1]), 3)
    return P.sub(P.poly([const, 4 * w**2, 0, -3]), cube)


def eta_prime(s, deficit, eps=DEFAULT_EPS, sigma=SIGMA) -> Enclosure:
    """Largest root of ``vol_lower`` in ``[def, 4(1 - s)]``.

    On that range the cubic is strictly decreasing in gamma (certified below),
    so the root is unique; bisection keeps ``vol_lower >= 0`` at ``lo`` and
    ``<= 0`` at ``hi`` for every parameter value in the input enclosures.
    """
    s, deficit, eps = Enclosure.of(s), Enclosure.of(deficit), rat(eps)
    p = VolParams(s, deficit, sigma)
    left, right = deficit.lo, 4 * (1 - s.lo)
    if right <= left:
        raise DomainError("empty search range [def, 4(1-s)]")
    vol = vol_lower_expr(Var("gamma"), Var("s"), Var("def"), p.sigma)

    slope_box = Box.make({"gamma": (left, right), "s": s, "def": deficit})
    slope = certify_sup_below(diff(vol, "gamma"), slope_box, 0, strict=True, budget=2000, eps=eps)
    if not slope.certified:
        raise DomainError("vol_lower is not certified decreasing in gamma on the search range")

    def value(gamma: Fraction) -> Enclosure:
        return evaluate(vol, _vol_env(Enclosure.point(gamma), p), eps)

    at_left, at_right = value(left), value(Fraction(4) * (1 - s.hi))
    if not at_left.lo >= 0 or not at_right.hi <= 0:
        raise DomainError(
            "no certified sign change of vol_lower on [def, 4(1-s)]: "
            f"value at def = {at_left}, value at 4(1-s) = {at_right}"
        )
    if s.is_point() and deficit.is_point():
        cubic = vol_poly(s.lo, deficit.lo, p.sigma)
        if P.evaluate(cubic, right) == 0:
            return Enclosure.point(right)
        lo, hi = P.largest_root_in(cubic, left, right, eps)
        return Enclosure(lo, hi)

    # interval parameters: bracket the root over the whole parameter set
    lo, hi = left, right  # vol >= 0 at lo for all params
    while hi - lo > eps:
        mid = (lo + hi) / 2
        if value(mid).lo >= 0:
            lo = mid
        else:
            hi = mid
    upper_lo, upper_hi = lo, right  # vol <= 0 at upper_hi for all params
    while upper_hi - upper_lo > eps:
        mid = (upper_lo + upper_hi) / 2
        if value(mid).hi <= 0:
            upper_hi = mid
        else:
            upper_lo = mid
    return Enclosure(lo, upper_hi)


def f_eta_expr(eta: ExprLike, deficit: ExprLike, sigma: ExprLike = SIGMA) -> Expr:
    eta, df, sigma = as_expr(eta), as_expr(deficit), as_expr(sigma)
    return sigma * eta / ((sigma - 5 + df) * (2 * (eta - df) + 1))


def f_reciprocal_expr(u: ExprLike, deficit: ExprLike, sigma: ExprLike = SIGMA) -> Expr:
    """``f`` rewritten in ``u = 1/eta``; bounded as ``eta`` grows without limit."""
    u, df, sigma = as_expr(u), as_expr(deficit), as_expr(sigma)
    return sigma / ((sigma - 5 + df) * (2 + u * (1 - 2 * df)))


def f_eta(eta, deficit, sigma=SIGMA) -> Enclosure:
    eta, deficit, sigma = Enclosure.of(eta), Enclosure.of(deficit), rat(sigma)
    if eta.hi < deficit.lo:
        raise DomainError("f needs eta >= def")
    if (sigma - 5 + deficit).lo <= 0:
        raise DomainError("sigma - 5 + def is not certified positive")
    if (2 * (eta - deficit) + 1).lo <= 0:
        raise DomainError("2(eta - def) + 1 is not certified positive")
    return evaluate(f_eta_expr(Var("eta"), Var("def"), sigma), {"eta": eta, "def": deficit})


def g_value(deficit, s=S_MAX, eps=DEFAULT_EPS) -> tuple[Enclosure, Enclosure]:
    """``(g(def), eta_prime)`` with ``g(def) = f(eta_prime(s, def), def)``."""
    eta = eta_prime(s, deficit, eps)
    return f_eta(eta, deficit), eta


@dataclass(frozen=True)
class MonotoneReport:
    pieces: int
    certified: int
    first_failure: Optional[tuple]

    @property
    def ok(self) -> bool:
        return self.certified == self.pieces

    def to_json(self) -> dict:
        return {
            "pieces": self.pieces,
            "certified": self.certified,
            "first_failure": None if self.first_failure is None else [fmt(x) for x in self.first_failure],
        }


def g_increasing_certificate(pieces: int = 32, s=S_MAX, eps=DEFAULT_EPS) -> MonotoneReport:
    """Best-effort certificate that ``g`` increases on ``[1.63, 5/3]``.

    On each sub-interval the implicit derivative
    ``dg/ddef = f_eta * (-V_def / V_gamma) + f_def`` is bounded below using the
    eta_prime enclosure over that sub-interval.
    """
    s = Enclosure.of(s)
    eta, df = Var("eta"), Var("def")
    vol = vol_lower_expr(eta, s.lo if s.is_point() else Var("s"), df)
    f = f_eta_expr(eta, df)
    slope = diff(f, "eta") * (Fraction(0) - diff(vol, "def")) / diff(vol, "eta") + diff(f, "def")
    step = (DEF_HI - DEF_LO) / pieces
    ok, failure = 0, None
    for j in range(pieces):
        piece = Enclosure(DEF_LO + j * step, DEF_LO + (j + 1) * step)
        eta_enc = eta_prime(s, piece, eps)
        box = Box.make({"eta": eta_enc, "def": piece, **({} if s.is_point() else {"s": s})})
        cert = certify_inf_above(slope, box, 0, strict=True, budget=200, eps=eps)
        if cert.certified:
            ok += 1
        elif failure is None:
            failure = (piece.lo, piece.hi)
    return MonotoneReport(pieces, ok, failure)


# ---------------------------------------------------------------------------
# scalar inequalities behind the piecewise bound


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    lhs: str
    rhs: str
    holds: bool

    def to_json(self) -> dict:
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs, "holds": self.holds}


def _t_poly(*coeffs) -> P.Poly:
    return P.poly(coeffs)


def lengthdiv_identities() -> list[IdentityCheck]:
    """Exact polynomial identities (in ``t`` with ``r = 1``) behind the three regimes."""
    t = _t_poly(0, 1)
    sq = lambda p: P.mul(p, p)  # noqa: E731
    checks = [
        (
            "t>=4: t^2/2 - (4t - 8) = (t - 4)^2 / 2",
            P.sub(P.scale(sq(t), Fraction(1, 2)), _t_poly(-8, 4)),
            P.scale(sq(_t_poly(-4, 1)), Fraction(1, 2)),
        ),
        (
            "2<=t<4: t^2 - (8 - (t - 4)^2) = 2 (t - 2)^2",
            P.sub(sq(t), P.sub(_t_poly(8), sq(_t_poly(-4, 1)))),
            P.scale(sq(_t_poly(-2, 1)), 2),
        ),
        (
            "4/3<=t<2: (3/2) t^2 - (4 - 3 (t - 2)^2) = (9/2) (t - 4/3)^2",
            P.sub(P.scale(sq(t), Fraction(3, 2)), P.sub(_t_poly(4), P.scale(sq(_t_poly(-2, 1)), 3))),
            P.scale(sq(_t_poly(Fraction(-4, 3), 1)), Fraction(9, 2)),
        ),
        (
            "x=1 bookkeeping: t^2/2 + (4 - t) t - (4 - t)^2/2 = 8 - (t - 4)^2",
            P.add(P.sub(P.scale(sq(t), Fraction(1, 2)), P.scale(sq(_t_poly(4, -1)), Fraction(1, 2))), P.mul(_t_poly(4, -1), t)),
            P.sub(_t_poly(8), sq(_t_poly(-4, 1))),
        ),
        (
            "x=2 bookkeeping: t^2 + (4 - 2t) t - (4 - 2t)^2/2 = 4 - 3 (t - 2)^2",
            P.add(P.sub(sq(t), P.scale(sq(_t_poly(4, -2)), Fraction(1, 2))), P.mul(_t_poly(4, -2), t)),
            P.sub(_t_poly(4), P.scale(sq(_t_poly(-2, 1)), 3)),
        ),
    ]
    return [IdentityCheck(name, str(lhs), str(rhs), lhs == rhs) for name, lhs, rhs in checks]


def lengthdiv_claims() -> list[tuple[str, Expr, Box]]:
    """The three regime inequalities, each as ``expr >= 0`` over a box (with ``r = 1``)."""
    t, u = Var("t"), Var("u")
    return [
        # t >= 4 written in u = 1/t in (0, 1/4]: divide t^2/2 - (4t - 8) by t^2
        ("t>=4: t^2/2 >= 4t - 8", Fraction(1, 2) - 4 * u + 8 * u**2, Box.make({"u": (0, Fraction(1, 4))})),
        ("2<=t<=4: t^2 >= 8 - (t - 4)^2", t**2 - (8 - (t - 4) ** 2), Box.make({"t": (2, 4)})),
        (
            "4/3<=t<=2: (3/2) t^2 >= 4 - 3 (t - 2)^2",
            Fraction(3, 2) * t**2 - (4 - 3 * (t - 2) ** 2),
            Box.make({"t": (Fraction(4, 3), 2)}),
        ),
    ]


def verify_lengthdiv_cases(budget: int = 10_000) -> list[tuple[str, Certificate]]:
    return [
        (name, certify_inf_above(e, box, 0, strict=False, budget=budget))
        for name, e, box in lengthdiv_claims()
    ]


def h_breakpoint_checks(r=Fraction(1)) -> list[tuple[str, Enclosure, Fraction]]:
    """``h`` at each breakpoint together with the common value of the adjacent pieces."""
    r = rat(r)
    return [
        ("t = 4r", h_lower(4 * r, r), 8 * r**2),
        ("t = 2r", h_lower(2 * r, r), 4 * r**2),
        ("t = 4r/3", h_lower(Fraction(4, 3) * r, r), Fraction(8, 3) * r**2),
    ]
