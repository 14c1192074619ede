"""Expression trees over named variables, evaluated in interval arithmetic.

Build expressions with ordinary operators::

    lam, p = Var("lam"), Var("p")
    e = 2 / (1 - lam) + root(2, 4) * p**2

and evaluate them over a mapping of variable names to :class:`Enclosure`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

from .exact import (
    DomainError,
    Enclosure,
    IntervalDivisionError,
    emax,
    emin,
    fmt,
    rat,
    root_enclosure,
)

DEFAULT_EPS = Fraction(1, 10**9)


class UnboundVariableError(KeyError):
    pass


class ExprDivisionError(IntervalDivisionError):
    """Division by an enclosure containing zero, with the offending subexpression."""

    def __init__(self, node: "Expr", denominator: Enclosure):
        self.node = node
        self.denominator = denominator
        super().__init__(f"denominator of {node} encloses zero: {denominator}")


class UnsupportedShapeError(TypeError):
    """Symbolic differentiation reached a Min, Max or Piecewise node."""


class Expr:
    __slots__ = ()

    def __add__(self, other):
        return Add(self, as_expr(other))

    def __radd__(self, other):
        return Add(as_expr(other), self)

    def __sub__(self, other):
        return Sub(self, as_expr(other))

    def __rsub__(self, other):
        return Sub(as_expr(other), self)

    def __mul__(self, other):
        return Mul(self, as_expr(other))

    def __rmul__(self, other):
        return Mul(as_expr(other), self)

    def __truediv__(self, other):
        return Div(self, as_expr(other))

    def __rtruediv__(self, other):
        return Div(as_expr(other), self)

    def __neg__(self):
        return Sub(Const(Fraction(0)), self)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("only integer powers; use root() for radicals")
        return IntPow(self, n)


@dataclass(frozen=True, eq=True)
class Const(Expr):
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", rat(self.value))

    def __str__(self):
        return fmt(self.value)


@dataclass(frozen=True, eq=True)
class Var(Expr):
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True, eq=True)
class Add(Expr):
    a: Expr
    b: Expr

    def __str__(self):
        return f"({self.a} + {self.b})"


@dataclass(frozen=True, eq=True)
class Sub(Expr):
    a: Expr
    b: Expr

    def __str__(self):
        if isinstance(self.a, Const) and self.a.value == 0:
            return f"(-{self.b})"
        return f"({self.a} - {self.b})"


@dataclass(frozen=True, eq=True)
class Mul(Expr):
    a: Expr
    b: Expr

    def __str__(self):
        return f"{self.a}*{self.b}"


@dataclass(frozen=True, eq=True)
class Div(Expr):
    a: Expr
    b: Expr

    def __str__(self):
        return f"{self.a}/({self.b})"


@dataclass(frozen=True, eq=True)
class IntPow(Expr):
    base: Expr
    n: int

    def __str__(self):
        return f"({self.base})^{self.n}"


@dataclass(frozen=True, eq=True)
class NthRoot(Expr):
    base: Expr
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("root index must be positive")

    def __str__(self):
        return f"root{self.n}({self.base})"


@dataclass(frozen=True, eq=True)
class Min(Expr):
    a: Expr
    b: Expr

    def __str__(self):
        return f"min({self.a}, {self.b})"


@dataclass(frozen=True, eq=True)
class Max(Expr):
    a: Expr
    b: Expr

    def __str__(self):
        return f"max({self.a}, {self.b})"


@dataclass(frozen=True, eq=True)
class Piece:
    """A branch that applies where every guard expression is ``>= 0``."""

    guards: tuple
    value: Expr


@dataclass(frozen=True, eq=True)
class Piecewise(Expr):
    pieces: tuple

    def __str__(self):
        parts = []
        for pc in self.pieces:
            cond = " and ".join(f"{g} >= 0" for g in pc.guards) or "otherwise"
            parts.append(f"{pc.value} if {cond}")
        return "{" + "; ".join(parts) + "}"


ExprLike = Union[Expr, int, Fraction, str]


def as_expr(x: ExprLike) -> Expr:
    if isinstance(x, Expr):
        return x
    return Const(rat(x))


def const(x: ExprLike) -> Expr:
    return as_expr(x)


def root(x: ExprLike, n: int) -> Expr:
    return NthRoot(as_expr(x), n)


def emin_expr(*args: ExprLike) -> Expr:
    out = as_expr(args[0])
    for a in args[1:]:
        out = Min(out, as_expr(a))
    return out


def emax_expr(*args: ExprLike) -> Expr:
    out = as_expr(args[0])
    for a in args[1:]:
        out = Max(out, as_expr(a))
    return out


def piecewise(*branches) -> Piecewise:
    """``piecewise((value, [guard, ...]), ...)`` where each guard means ``guard >= 0``."""
    return Piecewise(tuple(Piece(tuple(as_expr(g) for g in guards), as_expr(v)) for v, guards in branches))


# ---------------------------------------------------------------------------
# structure


def children(e: Expr) -> tuple:
    if isinstance(e, (Const, Var)):
        return ()
    if isinstance(e, (IntPow, NthRoot)):
        return (e.base,)
    if isinstance(e, Piecewise):
        out = []
        for pc in e.pieces:
            out.extend(pc.guards)
            out.append(pc.value)
        return tuple(out)
    return (e.a, e.b)


def variables(e: Expr) -> frozenset:
    names = set()
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            names.add(node.name)
        else:
            stack.extend(children(node))
    return frozenset(names)


def substitute(e: Expr, mapping: Mapping[str, ExprLike]) -> Expr:
    if isinstance(e, Var):
        return as_expr(mapping[e.name]) if e.name in mapping else e
    if isinstance(e, Const):
        return e
    if isinstance(e, (IntPow, NthRoot)):
        return type(e)(substitute(e.base, mapping), e.n)
    if isinstance(e, Piecewise):
        return Piecewise(
            tuple(
                Piece(tuple(substitute(g, mapping) for g in pc.guards), substitute(pc.value, mapping))
                for pc in e.pieces
            )
        )
    return type(e)(substitute(e.a, mapping), substitute(e.b, mapping))


# ---------------------------------------------------------------------------
# evaluation


def evaluate(e: Expr, env: Mapping[str, Enclosure], eps: Fraction = DEFAULT_EPS) -> Enclosure:
    """Sound enclosure of the range of ``e`` when each variable ranges over ``env``."""
    memo: dict[int, Enclosure] = {}
    eps = Fraction(eps)

    def ev(node: Expr) -> Enclosure:
        key = id(node)
        hit = memo.get(key)
        if hit is not None:
            return hit
        out = _eval_node(node, ev, env, eps)
        memo[key] = out
        return out

    return ev(e)


def _eval_node(node, ev, env, eps) -> Enclosure:
    if isinstance(node, Const):
        return Enclosure(node.value, node.value)
    if isinstance(node, Var):
        try:
            return env[node.name]
        except KeyError:
            raise UnboundVariableError(f"variable {node.name!r} is not bound") from None
    if isinstance(node, Add):
        return ev(node.a) + ev(node.b)
    if isinstance(node, Sub):
        return ev(node.a) - ev(node.b)
    if isinstance(node, Mul):
        if node.a is node.b:
            return ev(node.a) ** 2
        return ev(node.a) * ev(node.b)
    if isinstance(node, Div):
        den = ev(node.b)
        if den.contains_zero():
            raise ExprDivisionError(node, den)
        return ev(node.a) / den
    if isinstance(node, IntPow):
        base = ev(node.base)
        if node.n < 0 and base.contains_zero():
            raise ExprDivisionError(node, base)
        return base**node.n
    if isinstance(node, NthRoot):
        base = ev(node.base)
        if base.lo < 0:
            raise DomainError(f"root of {node.base} may be negative: {base}")
        return root_enclosure(base, node.n, eps)
    if isinstance(node, Min):
        return emin(ev(node.a), ev(node.b))
    if isinstance(node, Max):
        return emax(ev(node.a), ev(node.b))
    if isinstance(node, Piecewise):
        active = None
        for pc in node.pieces:
            if any(ev(g).hi < 0 for g in pc.guards):
                continue
            val = ev(pc.value)
            active = val if active is None else active.hull(val)
        if active is None:
            raise DomainError(f"no branch of {node} applies on this box")
        return active
    raise TypeError(f"unknown expression node {type(node).__name__}")


def evaluate_at(e: Expr, point: Mapping[str, ExprLike], eps: Fraction = DEFAULT_EPS) -> Enclosure:
    """Evaluate at a rational point."""
    return evaluate(e, {k: Enclosure.point(rat(v)) for k, v in point.items()}, eps)


# ---------------------------------------------------------------------------
# differentiation

_ZERO = Const(Fraction(0))
_ONE = Const(Fraction(1))


def _is_const(e: Expr, value) -> bool:
    return isinstance(e, Const) and e.value == value


def _add(a: Expr, b: Expr) -> Expr:
    if _is_const(a, 0):
        return b
    if _is_const(b, 0):
        return a
    return Add(a, b)


def _sub(a: Expr, b: Expr) -> Expr:
    if _is_const(b, 0):
        return a
    return Sub(a, b)


def _mul(a: Expr, b: Expr) -> Expr:
    if _is_const(a, 0) or _is_const(b, 0):
        return _ZERO
    if _is_const(a, 1):
        return b
    if _is_const(b, 1):
        return a
    return Mul(a, b)


def diff(e: Expr, var: str) -> Expr:
    """Symbolic partial derivative of ``e`` with respect to ``var``."""
    if var not in variables(e):
        return _ZERO
    if isinstance(e, Var):
        return _ONE
    if isinstance(e, Add):
        return _add(diff(e.a, var), diff(e.b, var))
    if isinstance(e, Sub):
        da, db = diff(e.a, var), diff(e.b, var)
        if _is_const(da, 0):
            return _ZERO if _is_const(db, 0) else Sub(_ZERO, db)
        return _sub(da, db)
    if isinstance(e, Mul):
        return _add(_mul(diff(e.a, var), e.b), _mul(e.a, diff(e.b, var)))
    if isinstance(e, Div):
        da, db = diff(e.a, var), diff(e.b, var)
        first = _ZERO if _is_const(da, 0) else Div(da, e.b)
        if _is_const(db, 0):
            return first
        second = Div(_mul(e.a, db), IntPow(e.b, 2))
        return _sub(first, second) if not _is_const(first, 0) else Sub(_ZERO, second)
    if isinstance(e, IntPow):
        if e.n == 0:
            return _ZERO
        inner = _ONE if e.n == 1 else (e.base if e.n == 2 else IntPow(e.base, e.n - 1))
        return _mul(_mul(Const(Fraction(e.n)), inner), diff(e.base, var))
    if isinstance(e, NthRoot):
        if e.n == 1:
            return diff(e.base, var)
        den = Mul(Const(Fraction(e.n)), e if e.n == 2 else IntPow(e, e.n - 1))
        return Div(diff(e.base, var), den)
    if isinstance(e, (Min, Max, Piecewise)):
        raise UnsupportedShapeError(
            f"{type(e).__name__} depends on {var!r}; split the region so the branch is fixed first"
        )
    raise TypeError(f"unknown expression node {type(e).__name__}")


def gradient(e: Expr) -> dict:
    """Partial derivatives for every variable; ``None`` where the shape is not differentiable."""
    out = {}
    for v in sorted(variables(e)):
        try:
            out[v] = diff(e, v)
        except UnsupportedShapeError:
            out[v] = None
    return out


# ---------------------------------------------------------------------------
# JSON


_BINARY = {"add": Add, "sub": Sub, "mul": Mul, "div": Div, "min": Min, "max": Max}
_BINARY_TAG = {cls: tag for tag, cls in _BINARY.items()}


def to_json(e: Expr) -> dict:
    if isinstance(e, Const):
        return {"op": "const", "value": fmt(e.value)}
    if isinstance(e, Var):
        return {"op": "var", "name": e.name}
    if isinstance(e, IntPow):
        return {"op": "pow", "n": e.n, "arg": to_json(e.base)}
    if isinstance(e, NthRoot):
        return {"op": "root", "n": e.n, "arg": to_json(e.base)}
    if isinstance(e, Piecewise):
        return {
            "op": "piecewise",
            "pieces": [
                {"guards": [to_json(g) for g in pc.guards], "value": to_json(pc.value)} for pc in e.pieces
            ],
        }
    return {"op": _BINARY_TAG[type(e)], "args": [to_json(e.a), to_json(e.b)]}


def from_json(d: Mapping) -> Expr:
    op = d["op"]
    if op == "const":
        return Const(rat(d["value"]))
    if op == "var":
        return Var(d["name"])
    if op == "pow":
        return IntPow(from_json(d["arg"]), int(d["n"]))
    if op == "root":
        return NthRoot(from_json(d["arg"]), int(d["n"]))
    if op == "piecewise":
        return Piecewise(
            tuple(Piece(tuple(from_json(g) for g in pc["guards"]), from_json(pc["value"])) for pc in d["pieces"])
        )
    a, b = d["args"]
    return _BINARY[op](from_json(a), from_json(b))
