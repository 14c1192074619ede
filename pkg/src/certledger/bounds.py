"""Named bound functions on the deficit, as expressions and as certified enclosures.

Each quantity has an ``*_expr`` builder (used verbatim by the claim ledger) and
an operation returning an :class:`Enclosure` for given inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import poly as P
from .exact import DomainError, Enclosure, fmt, rat
from .expr import DEFAULT_EPS, Expr, ExprLike, Max, Var, as_expr, evaluate, root

SIGMA = rat("5.9999")
N_DIM = 5
SLOPE_FAR = rat("0.0391")  # line used for q > 10
SLOPE_NEAR = rat("0.2884")  # line used for sigma < q <= 10
INTERCEPT_FAR = Fraction(3)
INTERCEPT_NEAR = rat("3.9999")


# ---------------------------------------------------------------------------
# beta_{d,e}(m) and its floor


def _check_bde(d: int, e: int, m: int) -> None:
    if d < 1 or e < d:
        raise DomainError(f"need e >= d >= 1, got d={d}, e={e}")
    if m < 1:
        raise DomainError("multiplicity must be at least 1")
    cap = math.comb(e - 1, d - 1)
    if m > cap:
        raise DomainError(
            f"multiplicity m={m} violates the bound m <= C(e-1, d-1) = C({e - 1}, {d - 1}) = {cap}"
        )


def binomial_poly(d: int, e: int, m: int) -> P.Poly:
    """``prod_{i<e-d} (e - y - i) - m * (e-d)!`` as a polynomial in ``y``."""
    factors = [P.poly([e - i, -1]) for i in range(e - d)]
    return P.sub(P.product(factors), P.poly([m * math.factorial(e - d)]))


def beta_de(d: int, e: int, m: int, eps=DEFAULT_EPS) -> Enclosure:
    """Largest real ``y <= d`` with ``C(e - y, e - d) = m``, read as a polynomial identity in ``y``."""
    if e == d:
        if m != 1:
            raise DomainError(f"C(e - y, 0) = 1 cannot equal m={m}")
        return Enclosure.point(d)
    _check_bde(d, e, m)
    f = binomial_poly(d, e, m)
    # On y <= d every factor e - y - i is >= 1 and grows as y decreases, so f
    # is strictly decreasing there; f(1) >= 0 >= f(d) brackets the unique root.
    # The polynomial is monic up to sign with integer coefficients, so any
    # rational root is an integer.
    for k in range(d, 0, -1):
        if P.evaluate(f, k) == 0:
            return Enclosure.point(k)
    lo, hi = Fraction(1), Fraction(d)
    eps = rat(eps)
    while hi - lo > eps:
        mid = (lo + hi) / 2
        if P.evaluate(f, mid) > 0:
            lo = mid
        else:
            hi = mid
    return Enclosure(lo, hi)


def alpha_de(d: int, e: int, m: int) -> int:
    """Floor of :func:`beta_de`, refined until no integer sits inside the enclosure."""
    eps = Fraction(1, 4)
    while True:
        enc = beta_de(d, e, m, eps)
        if math.floor(enc.lo) == math.floor(enc.hi):
            return math.floor(enc.lo)
        eps /= 2


# ---------------------------------------------------------------------------
# minimal slope mu(w)


def mu_poly(w, sigma, n: int) -> P.Poly:
    """``(w/sigma + mu)^n - mu (1 + mu)^(n-1)`` as a polynomial in ``mu``."""
    a = rat(w) / rat(sigma)
    return P.sub(P.power(P.poly([a, 1]), n), P.mul(P.poly([0, 1]), P.power(P.poly([1, 1]), n - 1)))


def mu_min(w, sigma=SIGMA, n: int = N_DIM, eps=DEFAULT_EPS) -> Enclosure:
    """Least ``mu > 0`` with ``(w/sigma + mu)^n <= mu (1 + mu)^(n-1)``."""
    w, sigma, eps = rat(w), rat(sigma), rat(eps)
    if not 0 <= w < n - 1:
        raise DomainError(f"need 0 <= w < n - 1, got w={fmt(w)}")
    if sigma <= n:
        raise DomainError("need sigma > n")
    if w == 0:
        return Enclosure.point(0)
    f = mu_poly(w, sigma, n)
    top = Fraction(1, 64)
    while P.evaluate(f, top) > 0:
        top *= 2
    lo, hi = P.smallest_root_in(f, 0, top, eps)
    return Enclosure(lo, hi)


# ---------------------------------------------------------------------------
# expression builders


def main_lemma_expr(sigma: ExprLike, n: ExprLike, beta: ExprLike) -> Expr:
    sigma, n, beta = as_expr(sigma), as_expr(n), as_expr(beta)
    return sigma * beta / (sigma - n + beta)


def root_of(m: int, d: int) -> Expr:
    return as_expr(m) if d == 1 else root(m, d)


def intermediate_expr(sigma, n, d: int, m: int, beta, beta_prime) -> Expr:
    sigma, n, beta, bp = as_expr(sigma), as_expr(n), as_expr(beta), as_expr(beta_prime)
    r = root_of(m, d)
    return bp / ((sigma - n + beta) / sigma - r * (beta - bp) / sigma)


def estofq_expr(sigma, d: int, m: int, lam, deficit, beta_prime) -> Expr:
    """Branch taken when the deficit exceeds ``beta_prime``."""
    sigma, lam, df, bp = as_expr(sigma), as_expr(lam), as_expr(deficit), as_expr(beta_prime)
    r = root_of(m, d)
    return bp / ((1 - lam) - df * r / sigma + bp * r / sigma)


def divisor_center_expr(n, m, mu, sigma) -> Expr:
    n, m, mu, sigma = as_expr(n), as_expr(m), as_expr(mu), as_expr(sigma)
    return (n - m + mu * sigma) / (1 + mu)


def phi_lines(q: ExprLike, sigma: ExprLike) -> tuple[Expr, Expr]:
    q, sigma = as_expr(q), as_expr(sigma)
    far = INTERCEPT_FAR - SLOPE_FAR * (q - sigma)
    near = INTERCEPT_NEAR - SLOPE_NEAR * (q - sigma)
    return far, near


def phi_lower_expr(q: ExprLike, sigma: ExprLike) -> Expr:
    far, near = phi_lines(q, sigma)
    return Max(far, near)


# ---------------------------------------------------------------------------
# enclosure-valued operations


def _positive(enc: Enclosure, what: str) -> None:
    if enc.lo <= 0:
        raise DomainError(f"{what} is not certified positive: {enc}")


def main_lemma_bound(sigma, n: int, beta) -> Enclosure:
    sigma, beta = rat(sigma), Enclosure.of(beta)
    if sigma <= n:
        raise DomainError("need sigma > n")
    if beta.lo <= 0:
        raise DomainError("need beta > 0")
    _positive(sigma - n + beta, "sigma - n + beta")
    return evaluate(main_lemma_expr(sigma, n, Var("beta")), {"beta": beta})


def phi_lower(q, sigma=SIGMA) -> Enclosure:
    """Max of the two linear lower bounds; ``q = sigma`` is accepted as the limiting value."""
    q, sigma = Enclosure.of(q), rat(sigma)
    if q.lo < sigma:
        raise DomainError(f"need q > sigma, got {q}")
    return evaluate(phi_lower_expr(Var("q"), sigma), {"q": q})


def phi_lower_split(q, sigma=SIGMA) -> Enclosure:
    """Literal two-range form: far line when ``q > 10``, near line when ``q <= 10``."""
    q, sigma = Enclosure.of(q), rat(sigma)
    if q.lo < sigma:
        raise DomainError(f"need q > sigma, got {q}")
    far, near = phi_lines(Var("q"), sigma)
    env = {"q": q}
    if q.lo > 10:
        return evaluate(far, env)
    if q.hi <= 10:
        return evaluate(near, env)
    return evaluate(far, env).hull(evaluate(near, env))


@dataclass(frozen=True)
class DeficitBoundInputs:
    d: int
    m: int
    n: int
    sigma: Fraction
    lam: Enclosure
    beta: Enclosure
    beta_prime: Enclosure
    e: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "sigma", rat(self.sigma))
        for name in ("lam", "beta", "beta_prime"):
            object.__setattr__(self, name, Enclosure.of(getattr(self, name)))
        if not 1 <= self.d <= self.n - 1:
            raise DomainError(f"need 1 <= d <= n - 1, got d={self.d}")
        if self.e is not None and self.e < self.d:
            raise DomainError("embedding dimension below the center dimension")
        if self.m < 1:
            raise DomainError("multiplicity must be at least 1")
        if self.sigma <= self.n:
            raise DomainError("need sigma > n")
        if self.lam.lo < 0 or self.lam.hi >= 1:
            raise DomainError(f"lambda must lie in [0, 1), got {self.lam}")

    def env(self) -> dict:
        return {"lam": self.lam, "beta": self.beta, "bp": self.beta_prime}


def estofq_bound(inputs: DeficitBoundInputs, deficit, eps=DEFAULT_EPS) -> Enclosure:
    """Bound on ``def/(1 - lam)`` from the deficit comparison against ``beta_prime``.

    When the comparison cannot be decided the hull of both branches is returned.
    """
    deficit = Enclosure.of(deficit)
    env = inputs.env() | {"def": deficit}
    bp = inputs.beta_prime
    big = estofq_expr(inputs.sigma, inputs.d, inputs.m, Var("lam"), Var("def"), Var("bp"))
    small = Var("def") / (1 - Var("lam"))

    def big_branch() -> Enclosure:
        r = root_of(inputs.m, inputs.d)
        den = evaluate((1 - Var("lam")) - (Var("def") - Var("bp")) * r / inputs.sigma, env, eps)
        _positive(den, "denominator of the deficit estimate")
        return evaluate(big, env, eps)

    if deficit.lo > bp.hi:
        return big_branch()
    if deficit.hi <= bp.lo:
        return evaluate(small, env, eps)
    return big_branch().hull(evaluate(small, env, eps))


def intermediate_bound(inputs: DeficitBoundInputs, eps=DEFAULT_EPS) -> Enclosure:
    if inputs.beta.hi < inputs.beta_prime.lo:
        raise DomainError("need beta >= beta_prime")
    e = intermediate_expr(inputs.sigma, inputs.n, inputs.d, inputs.m, Var("beta"), Var("bp"))
    den = e.b  # the expression is bp / den
    _positive(evaluate(den, inputs.env(), eps), "denominator of the intermediate bound")
    return evaluate(e, inputs.env(), eps)


def divisor_center_bound(n: int, m: int, mu, sigma=SIGMA) -> Enclosure:
    mu = Enclosure.of(mu)
    if m < 1:
        raise DomainError("multiplicity must be at least 1")
    if mu.lo < 0:
        raise DomainError("mu must be nonnegative")
    return evaluate(divisor_center_expr(n, m, Var("mu"), rat(sigma)), {"mu": mu})
