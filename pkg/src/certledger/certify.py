"""Certified bounds on the range of an expression over a constrained box.

``certify_sup_below`` proves ``sup e < c`` (or ``<= c``) by adaptive bisection:
every leaf sub-box that may contain feasible points must evaluate to an
enclosure whose upper end clears the threshold.  Leaves whose plain interval
evaluation is too loose get a second chance through a monotonicity reduction:
when a partial derivative has a certified sign on the leaf, the maximum lies on
the corresponding face, so that variable is pinned to an endpoint.
"""

from __future__ import annotations

import enum
import heapq
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .exact import DomainError, Enclosure, IntervalDivisionError, fmt, rat
from .exact import _tame_hi, _tame_lo
from .expr import DEFAULT_EPS, Const, Expr, Sub, UnsupportedShapeError, diff, evaluate, from_json, gradient, to_json, variables

DEFAULT_BUDGET = 100_000
_INF = float("inf")


# ---------------------------------------------------------------------------
# boxes and constraints


@dataclass(frozen=True)
class LinearConstraint:
    """``sum(coeff * var) <cmp> bound`` with ``cmp`` in ``{"<=", ">="}``."""

    coeffs: tuple
    cmp: str
    bound: Fraction

    def __post_init__(self):
        if self.cmp not in ("<=", ">="):
            raise ValueError(f"unsupported comparator {self.cmp!r}")
        items = self.coeffs.items() if isinstance(self.coeffs, Mapping) else self.coeffs
        norm = tuple(sorted((str(k), rat(v)) for k, v in items if rat(v) != 0))
        object.__setattr__(self, "coeffs", norm)
        object.__setattr__(self, "bound", rat(self.bound))

    def as_upper(self) -> tuple[tuple, Fraction]:
        """The same constraint written as ``sum(a * x) <= b``."""
        if self.cmp == "<=":
            return self.coeffs, self.bound
        return tuple((k, -a) for k, a in self.coeffs), -self.bound

    def holds_at(self, point: Mapping[str, Fraction]) -> bool:
        lhs = sum((a * point[k] for k, a in self.coeffs), Fraction(0))
        return lhs <= self.bound if self.cmp == "<=" else lhs >= self.bound

    def __str__(self):
        lhs = " + ".join(f"{fmt(a)}*{k}" for k, a in self.coeffs)
        return f"{lhs} {self.cmp} {fmt(self.bound)}"

    def to_json(self) -> dict:
        return {"coeffs": {k: fmt(a) for k, a in self.coeffs}, "cmp": self.cmp, "bound": fmt(self.bound)}

    @classmethod
    def from_json(cls, d: Mapping) -> "LinearConstraint":
        return cls(tuple(d["coeffs"].items()), d["cmp"], rat(d["bound"]))


def linear(coeffs: Mapping[str, object], cmp: str, bound) -> LinearConstraint:
    return LinearConstraint(tuple(coeffs.items()), cmp, rat(bound))


@dataclass(frozen=True)
class ExprConstraint:
    """``expr <= 0`` or ``expr >= 0``; prunes sub-boxes where it certainly fails."""

    expr: Expr
    cmp: str

    def __post_init__(self):
        if self.cmp not in ("<=", ">="):
            raise ValueError(f"unsupported comparator {self.cmp!r}")

    def certainly_violated(self, env, eps) -> bool:
        try:
            enc = evaluate(self.expr, env, eps)
        except (IntervalDivisionError, DomainError):
            return False
        return enc.lo > 0 if self.cmp == "<=" else enc.hi < 0

    def certainly_holds(self, env, eps) -> bool:
        try:
            enc = evaluate(self.expr, env, eps)
        except (IntervalDivisionError, DomainError):
            return False
        return enc.hi <= 0 if self.cmp == "<=" else enc.lo >= 0

    def __str__(self):
        return f"{self.expr} {self.cmp} 0"

    def to_json(self) -> dict:
        return {"expr": to_json(self.expr), "cmp": self.cmp}

    @classmethod
    def from_json(cls, d: Mapping) -> "ExprConstraint":
        return cls(from_json(d["expr"]), d["cmp"])


@dataclass(frozen=True)
class Box:
    """Per-variable closed ranges plus optional linear and nonlinear constraints."""

    ranges: tuple
    constraints: tuple = ()
    nonlinear: tuple = ()

    def __post_init__(self):
        items = self.ranges.items() if isinstance(self.ranges, Mapping) else self.ranges
        norm = tuple(sorted((str(k), Enclosure.of(v)) for k, v in items))
        object.__setattr__(self, "ranges", norm)
        object.__setattr__(self, "constraints", tuple(self.constraints))
        object.__setattr__(self, "nonlinear", tuple(self.nonlinear))
        names = {k for k, _ in norm}
        for con in self.constraints:
            missing = {k for k, _ in con.coeffs} - names
            if missing:
                raise ValueError(f"constraint {con} mentions unbounded variables {sorted(missing)}")

    @classmethod
    def make(cls, ranges: Optional[Mapping] = None, constraints: Iterable = (), nonlinear: Iterable = ()) -> "Box":
        return cls(tuple((ranges or {}).items()), tuple(constraints), tuple(nonlinear))

    @property
    def names(self) -> tuple:
        return tuple(k for k, _ in self.ranges)

    def env(self) -> dict:
        return dict(self.ranges)

    def tightened(self) -> Optional["Box"]:
        env = tighten(self.env(), self.constraints)
        if env is None:
            return None
        return Box(tuple(env.items()), self.constraints, self.nonlinear)

    def to_json(self) -> dict:
        return {
            "ranges": {k: [fmt(v.lo), fmt(v.hi)] for k, v in self.ranges},
            "constraints": [c.to_json() for c in self.constraints],
            "nonlinear": [c.to_json() for c in self.nonlinear],
        }

    @classmethod
    def from_json(cls, d: Mapping) -> "Box":
        return cls(
            tuple((k, (rat(lo), rat(hi))) for k, (lo, hi) in d["ranges"].items()),
            tuple(LinearConstraint.from_json(c) for c in d.get("constraints", [])),
            tuple(ExprConstraint.from_json(c) for c in d.get("nonlinear", [])),
        )

    def __str__(self):
        parts = [f"{k} in {v}" for k, v in self.ranges]
        parts += [str(c) for c in self.constraints]
        parts += [str(c) for c in self.nonlinear]
        return "{" + ", ".join(parts) + "}"


def tighten(env: dict, constraints: Iterable[LinearConstraint], passes: int = 4) -> Optional[dict]:
    """Bound propagation for linear constraints; ``None`` if the box is infeasible."""
    env = dict(env)
    rows = [c.as_upper() for c in constraints]
    for _ in range(passes):
        changed = False
        for coeffs, bound in rows:
            mins = []
            for k, a in coeffs:
                iv = env[k]
                mins.append(a * iv.lo if a > 0 else a * iv.hi)
            total = sum(mins, Fraction(0))
            if total > bound:
                return None
            for (k, a), m in zip(coeffs, mins):
                slack = bound - (total - m)
                iv = env[k]
                if a > 0:
                    new_hi = _tame_hi(slack / a)
                    if new_hi < iv.hi:
                        if new_hi < iv.lo:
                            return None
                        env[k] = Enclosure(iv.lo, new_hi)
                        changed = True
                else:
                    new_lo = _tame_lo(slack / a)
                    if new_lo > iv.lo:
                        if new_lo > iv.hi:
                            return None
                        env[k] = Enclosure(new_lo, iv.hi)
                        changed = True
        if not changed:
            break
    return env


def _shave_end(env: dict, name: str, cons, eps, from_lo: bool, steps: int) -> Enclosure:
    """Move one end of ``env[name]`` inward past any slice where a constraint certainly fails."""
    iv = env[name]
    anchor = iv.lo if from_lo else iv.hi
    good, bad = anchor, (iv.hi if from_lo else iv.lo)  # slice [anchor, good] is infeasible
    for _ in range(steps):
        mid = (good + bad) / 2
        piece = Enclosure(anchor, mid) if from_lo else Enclosure(mid, anchor)
        trial = dict(env)
        trial[name] = piece
        if any(c.certainly_violated(trial, eps) for c in cons):
            good = mid
        else:
            bad = mid
    if good == anchor:
        return iv
    return Enclosure(good, iv.hi) if from_lo else Enclosure(iv.lo, good)


def shave(env: dict, cons, eps, steps: int = 10) -> Optional[dict]:
    """Contract a box against nonlinear constraints by trimming infeasible end slices.

    Each variable's range is bisected from both ends; a slice is removed only
    when some constraint is certainly violated on it with the other variables
    left at their full ranges, so no feasible point is lost.
    """
    env = dict(env)
    for name in sorted(env):
        if env[name].is_point():
            continue
        for from_lo in (True, False):
            env[name] = _shave_end(env, name, cons, eps, from_lo, steps)
    if any(c.certainly_violated(env, eps) for c in cons):
        return None
    return env


def _point_feasible(point: Mapping[str, Fraction], box: Box, eps) -> bool:
    if any(not c.holds_at(point) for c in box.constraints):
        return False
    penv = {k: Enclosure.point(v) for k, v in point.items()}
    return all(c.certainly_holds(penv, eps) for c in box.nonlinear)


# ---------------------------------------------------------------------------
# certificates


class Verdict(enum.Enum):
    CERTIFIED = "certified"
    REFUTED = "refuted"
    INCONCLUSIVE = "inconclusive"


class Direction(enum.Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"


@dataclass(frozen=True)
class Certificate:
    """Outcome of a range certification.

    ``lower``/``upper`` bracket the extremum that was certified (the sup for
    ``kind == "sup"``, the inf for ``kind == "inf"``); either may be ``None``
    when no information was obtained.
    """

    verdict: Verdict
    kind: str
    threshold: Fraction
    strict: bool
    lower: Optional[Fraction]
    upper: Optional[Fraction]
    leaves: int
    witness: Optional[dict] = None
    vacuous: bool = False
    message: str = ""

    @property
    def certified(self) -> bool:
        return self.verdict is Verdict.CERTIFIED

    @property
    def bound(self) -> Optional[Enclosure]:
        if self.lower is None or self.upper is None:
            return None
        return Enclosure(min(self.lower, self.upper), max(self.lower, self.upper))

    def to_json(self) -> dict:
        def opt(x):
            return None if x is None else fmt(x)

        return {
            "verdict": self.verdict.value,
            "kind": self.kind,
            "threshold": fmt(self.threshold),
            "strict": self.strict,
            "lower": opt(self.lower),
            "upper": opt(self.upper),
            "leaves": self.leaves,
            "witness": self.witness,
            "vacuous": self.vacuous,
            "message": self.message,
        }


def _witness(env: Mapping[str, Enclosure]) -> dict:
    return {k: [fmt(v.lo), fmt(v.hi)] for k, v in sorted(env.items())}


def _passes(hi, c: Fraction, strict: bool) -> bool:
    return hi < c if strict else hi <= c


def _violates(lo: Fraction, c: Fraction, strict: bool) -> bool:
    return lo >= c if strict else lo > c


def _safe_upper(e: Expr, env, eps):
    try:
        return evaluate(e, env, eps).hi
    except (IntervalDivisionError, DomainError):
        return _INF


def _pin_monotone(grads: Mapping[str, Optional[Expr]], env: dict, eps) -> tuple[dict, bool]:
    """Pin every variable whose partial derivative has a certified sign to its maximizing end."""
    env = dict(env)
    pinned_any = False
    progress = True
    while progress:
        progress = False
        for name, g in grads.items():
            if g is None or env[name].is_point():
                continue
            try:
                d = evaluate(g, env, eps)
            except (IntervalDivisionError, DomainError):
                continue
            if d.lo >= 0:
                env[name] = Enclosure.point(env[name].hi)
            elif d.hi <= 0:
                env[name] = Enclosure.point(env[name].lo)
            else:
                continue
            pinned_any = progress = True
    return env, pinned_any


class _Search:
    def __init__(self, e: Expr, box: Box, c: Fraction, strict: bool, eps, use_monotonicity: bool):
        self.e, self.box, self.c, self.strict, self.eps = e, box, c, strict, Fraction(eps)
        self.grads = gradient(e) if use_monotonicity else {}
        self.grads = {k: v for k, v in self.grads.items() if k in box.names}
        self.best_lo: Optional[Fraction] = None
        self.max_hi: Optional[Fraction] = None
        self.evaluated = 0

    def upper(self, env) -> object:
        hi = _safe_upper(self.e, env, self.eps)
        if not _passes(hi, self.c, self.strict) and self.grads:
            pinned, any_pinned = _pin_monotone(self.grads, env, self.eps)
            if any_pinned:
                hi = min(hi, _safe_upper(self.e, pinned, self.eps))
        return hi

    def feasible_leaf(self, env) -> Optional[dict]:
        env = tighten(env, self.box.constraints)
        if env is None:
            return None
        if any(c.certainly_violated(env, self.eps) for c in self.box.nonlinear):
            return None
        if self.box.nonlinear:
            env = shave(env, self.box.nonlinear, self.eps)
            if env is not None:
                env = tighten(env, self.box.constraints)
        return env

    def probe(self, point: Mapping[str, Fraction]) -> Optional[Fraction]:
        """Certified lower bound of ``e`` at a feasible point, else ``None``."""
        if not _point_feasible(point, self.box, self.eps):
            return None
        try:
            lo = evaluate(self.e, {k: Enclosure.point(v) for k, v in point.items()}, self.eps).lo
        except (IntervalDivisionError, DomainError):
            return None
        if self.best_lo is None or lo > self.best_lo:
            self.best_lo = lo
        return lo

    def candidates(self, env, corners: bool) -> list:
        center = {k: v.mid for k, v in env.items()}
        out = [center]
        if self.grads:
            pinned, _ = _pin_monotone(self.grads, env, self.eps)
            out.append({k: (v.lo if v.is_point() else v.mid) for k, v in pinned.items()})
        if corners and 0 < len(env) <= 4:
            keys = sorted(env)
            for ends in itertools.product((0, 1), repeat=len(keys)):
                out.append({k: (env[k].hi if b else env[k].lo) for k, b in zip(keys, ends)})
        return out

    def try_refute(self, env, corners=False) -> Optional[dict]:
        """Return the worst violating candidate point, if any."""
        worst, worst_lo = None, None
        for pt in self.candidates(env, corners):
            lo = self.probe(pt)
            if lo is not None and _violates(lo, self.c, self.strict) and (worst_lo is None or lo > worst_lo):
                worst, worst_lo = pt, lo
        if worst is None:
            return None
        return {k: [fmt(v), fmt(v)] for k, v in sorted(worst.items())}

    def record_pass(self, hi):
        if self.max_hi is None or hi > self.max_hi:
            self.max_hi = hi


def certify_sup_below(
    e: Expr,
    box: Box,
    c,
    strict: bool = True,
    budget: int = DEFAULT_BUDGET,
    eps=DEFAULT_EPS,
    use_monotonicity: bool = True,
) -> Certificate:
    """Certify ``sup e < c`` (``<= c`` when ``strict`` is false) over the feasible part of ``box``."""
    c = rat(c)
    if budget < 1:
        raise ValueError("budget must be positive")
    unbound = variables(e) - set(box.names)
    if unbound:
        raise ValueError(f"unbound variables {sorted(unbound)}")
    search = _Search(e, box, c, strict, eps, use_monotonicity)

    def done(verdict, witness=None, message="", vacuous=False):
        upper = search.max_hi if verdict is Verdict.CERTIFIED else None
        return Certificate(verdict, "sup", c, strict, search.best_lo, upper, search.evaluated, witness, vacuous, message)

    root_env = search.feasible_leaf(box.env())
    if root_env is None:
        return done(Verdict.CERTIFIED, message="region is empty after constraints", vacuous=True)
    ref_width = {k: v.width for k, v in root_env.items()}

    refuted = search.try_refute(root_env, corners=True)
    if refuted is not None:
        return done(Verdict.REFUTED, refuted, "feasible point exceeds the threshold")

    counter = itertools.count()
    heap: list = []

    def admit(env):
        search.evaluated += 1
        hi = search.upper(env)
        if _passes(hi, c, strict):
            search.record_pass(hi)
            return
        heapq.heappush(heap, (-hi, next(counter), env))

    admit(root_env)
    while heap:
        neg_hi, _, env = heapq.heappop(heap)
        refuted = search.try_refute(env)
        if refuted is not None:
            return done(Verdict.REFUTED, refuted, "feasible point exceeds the threshold")
        splittable = [k for k, v in env.items() if v.width > 0]
        if not splittable:
            # a single point whose enclosure straddles the threshold: sharpen the roots
            hi = _safe_upper(e, env, search.eps / 2**40)
            if _passes(hi, c, strict):
                search.record_pass(hi)
                continue
            return done(Verdict.INCONCLUSIVE, _witness(env), "point evaluation does not separate from the threshold")
        if search.evaluated >= budget:
            heapq.heappush(heap, (neg_hi, -1, env))
            worst = min(heap, key=lambda item: (item[0], item[1]))[2]
            return done(Verdict.INCONCLUSIVE, _witness(worst), f"budget of {budget} leaf evaluations exhausted")
        var = max(splittable, key=lambda k: (env[k].width / ref_width[k], k))
        iv = env[var]
        mid = iv.mid
        for half in (Enclosure(iv.lo, mid), Enclosure(mid, iv.hi)):
            child = dict(env)
            child[var] = half
            child = search.feasible_leaf(child)
            if child is not None:
                admit(child)

    if search.best_lo is None and search.max_hi is not None:
        search.try_refute(root_env, corners=True)
    return done(Verdict.CERTIFIED)


def certify_inf_above(
    e: Expr,
    box: Box,
    c,
    strict: bool = True,
    budget: int = DEFAULT_BUDGET,
    eps=DEFAULT_EPS,
    use_monotonicity: bool = True,
) -> Certificate:
    """Certify ``inf e > c`` (``>= c`` when ``strict`` is false)."""
    c = rat(c)
    neg = certify_sup_below(Sub(Const(Fraction(0)), e), box, -c, strict, budget, eps, use_monotonicity)
    return Certificate(
        neg.verdict,
        "inf",
        c,
        strict,
        None if neg.upper is None else -neg.upper,
        None if neg.lower is None else -neg.lower,
        neg.leaves,
        neg.witness,
        neg.vacuous,
        neg.message,
    )


def certify_monotone(
    e: Expr,
    box: Box,
    var: str,
    direction: Direction,
    budget: int = DEFAULT_BUDGET,
    eps=DEFAULT_EPS,
) -> Certificate:
    """Certify that ``e`` is (weakly) monotone in ``var`` on the box via its partial derivative.

    Raises :class:`UnsupportedShapeError` if ``var`` reaches a Min, Max or
    Piecewise node.
    """
    d = diff(e, var)
    if direction is Direction.INCREASING:
        return certify_inf_above(d, box, 0, strict=False, budget=budget, eps=eps)
    return certify_sup_below(d, box, 0, strict=False, budget=budget, eps=eps)
