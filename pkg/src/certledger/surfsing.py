"""Resolution dual graphs of surface singularities.

A :class:`DualGraph` stores the weights ``b_i >= 2`` (the exceptional curve
``E_i`` has ``E_i^2 = -b_i``) and the edges between curves.  From it we
compute the fundamental cycle (Laufer's sequence), the arithmetic genus test
for rationality, the multiplicity ``-Z^2``, the discrepancies of the relative
canonical divisor and the minimal log discrepancy.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Optional, Sequence

from .exact import fmt


class NotNegativeDefiniteError(ValueError):
    pass


class IntegrityError(RuntimeError):
    """An internal identity that must hold for rational graphs failed."""


def leading_minors(matrix: Sequence[Sequence[int]]) -> list[int]:
    """All leading principal minors, by fraction-free (Bareiss) elimination without pivoting.

    Stops early (returning the minors found so far plus a zero) when a minor vanishes.
    """
    a = [list(map(int, row)) for row in matrix]
    n = len(a)
    minors = []
    prev = 1
    for k in range(n):
        pivot = a[k][k]
        minors.append(pivot)
        if pivot == 0:
            break
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
        prev = pivot
    return minors


def is_negative_definite(matrix: Sequence[Sequence[int]]) -> bool:
    minors = leading_minors(matrix)
    if len(minors) < len(matrix):
        return False
    return all((m < 0) if k % 2 == 0 else (m > 0) for k, m in enumerate(minors))


@dataclass(frozen=True)
class DualGraph:
    weights: tuple
    edges: tuple = ()
    matrix: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        weights = tuple(int(b) for b in self.weights)
        edges = tuple(sorted(tuple(sorted((int(i), int(j)))) for i, j in self.edges))
        r = len(weights)
        if r == 0:
            raise ValueError("a dual graph needs at least one curve")
        if any(b < 2 for b in weights):
            raise ValueError("weights must be >= 2 (no (-1)-curves on a minimal resolution)")
        if len(set(edges)) != len(edges) or any(i == j or not (0 <= i < r and 0 <= j < r) for i, j in edges):
            raise ValueError("edges must be distinct pairs of distinct vertices")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "edges", edges)
        m = [[0] * r for _ in range(r)]
        for i, b in enumerate(weights):
            m[i][i] = -b
        for i, j in edges:
            m[i][j] = m[j][i] = 1
        object.__setattr__(self, "matrix", tuple(tuple(row) for row in m))
        if not self._connected():
            raise ValueError("dual graph must be connected")
        if not is_negative_definite(self.matrix):
            raise NotNegativeDefiniteError(f"intersection matrix of {self.to_json()} is not negative definite")

    @property
    def size(self) -> int:
        return len(self.weights)

    def is_tree(self) -> bool:
        return len(self.edges) == self.size - 1

    def neighbors(self, v: int) -> list[int]:
        return [j if i == v else i for i, j in self.edges if v in (i, j)]

    def _connected(self) -> bool:
        seen, stack = {0}, [0]
        while stack:
            v = stack.pop()
            for w in self.neighbors(v):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.size

    # -- JSON (1-based on the wire) -------------------------------------
    def to_json(self) -> dict:
        return {"weights": list(self.weights), "edges": [[i + 1, j + 1] for i, j in self.edges]}

    @classmethod
    def from_json(cls, d) -> "DualGraph":
        return cls(tuple(d["weights"]), tuple((i - 1, j - 1) for i, j in d.get("edges", [])))

    @classmethod
    def load(cls, path) -> "DualGraph":
        return cls.from_json(json.loads(Path(path).read_text()))

    @classmethod
    def chain(cls, weights: Sequence[int]) -> "DualGraph":
        return cls(tuple(weights), tuple((i, i + 1) for i in range(len(weights) - 1)))


# ---------------------------------------------------------------------------
# intersection arithmetic


def dot(g: DualGraph, x: Sequence, y: Sequence):
    return sum(x[i] * g.matrix[i][j] * y[j] for i in range(g.size) for j in range(g.size) if g.matrix[i][j])


def dot_curve(g: DualGraph, x: Sequence, i: int):
    """``X . E_i``."""
    return sum(x[j] * g.matrix[j][i] for j in range(g.size))


def canonical_dot(g: DualGraph, x: Sequence):
    """``K . X`` using ``K . E_j = -E_j^2 - 2 = b_j - 2`` (rational curves)."""
    return sum(a * (b - 2) for a, b in zip(x, g.weights))


def arithmetic_genus(g: DualGraph, x: Sequence):
    return 1 + Fraction(dot(g, x, x) + canonical_dot(g, x), 2)


def is_antinef(g: DualGraph, x: Sequence) -> bool:
    return all(dot_curve(g, x, i) <= 0 for i in range(g.size))


def fundamental_cycle(g: DualGraph) -> tuple:
    """Laufer's sequence: start at ``sum E_i`` and add ``E_i`` while some ``Z . E_i > 0``."""
    z = [1] * g.size
    while True:
        for i in range(g.size):
            if dot_curve(g, z, i) > 0:
                z[i] += 1
                break
        else:
            return tuple(z)


def is_rational(g: DualGraph) -> bool:
    return arithmetic_genus(g, fundamental_cycle(g)) == 0


def multiplicity(g: DualGraph) -> int:
    z = fundamental_cycle(g)
    m = -dot(g, z, z)
    if canonical_dot(g, z) != m - 2:
        raise IntegrityError(f"K.Z = {canonical_dot(g, z)} but -Z^2 - 2 = {m - 2}; graph is not rational")
    return m


def embedding_dimension(g: DualGraph) -> int:
    return multiplicity(g) + 1


def solve(matrix: Sequence[Sequence[int]], rhs: Sequence) -> tuple:
    """Exact Gaussian elimination over the rationals."""
    n = len(matrix)
    a = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        for r in range(n):
            if r != col and a[r][col] != 0:
                k = a[r][col] / a[col][col]
                a[r] = [x - k * y for x, y in zip(a[r], a[col])]
    return tuple(a[i][n] / a[i][i] for i in range(n))


def discrepancies(g: DualGraph) -> tuple:
    """Coefficients ``x_i`` of ``K = sum x_i E_i`` with ``K . E_j = b_j - 2`` for every ``j``."""
    x = solve(g.matrix, [b - 2 for b in g.weights])
    for j, b in enumerate(g.weights):
        if dot_curve(g, x, j) != b - 2:
            raise IntegrityError("discrepancy system residual is nonzero")
    return x


def mld(g: DualGraph) -> Fraction:
    return min(1 + x for x in discrepancies(g))


# ---------------------------------------------------------------------------
# brute-force cross-checks


def minimal_antinef_bruteforce(g: DualGraph, max_coeff: int) -> list[tuple]:
    """All componentwise-minimal anti-nef cycles ``Z >= sum E_i`` with entries ``<= max_coeff``."""
    found = [z for z in itertools.product(range(1, max_coeff + 1), repeat=g.size) if is_antinef(g, z)]
    return [z for z in found if not any(w != z and all(a <= b for a, b in zip(w, z)) for w in found)]


def negative_definite_bruteforce(g_matrix: Sequence[Sequence[int]], bound: int = 3) -> bool:
    n = len(g_matrix)
    for v in itertools.product(range(-bound, bound + 1), repeat=n):
        if any(v):
            q = sum(v[i] * g_matrix[i][j] * v[j] for i in range(n) for j in range(n))
            if q >= 0:
                return False
    return True


def artin_bruteforce(g: DualGraph, max_coeff: int) -> bool:
    """``p_a(D) <= 0`` for every nonzero cycle with entries in ``[0, max_coeff]``."""
    for d in itertools.product(range(max_coeff + 1), repeat=g.size):
        if any(d) and arithmetic_genus(g, d) > 0:
            return False
    return True


# ---------------------------------------------------------------------------
# enumeration of weighted trees up to isomorphism


def _centers(n: int, adj: list[list[int]]) -> list[int]:
    if n == 1:
        return [0]
    degree = [len(a) for a in adj]
    layer = [v for v in range(n) if degree[v] == 1]
    remaining = n
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for v in layer:
            for w in adj[v]:
                degree[w] -= 1
                if degree[w] == 1:
                    nxt.append(w)
        layer = nxt
    return sorted(layer)


def canonical_form(weights: Sequence[int], edges: Sequence[tuple]) -> str:
    """Center-rooted canonical string of a weighted tree."""
    n = len(weights)
    adj = [[] for _ in range(n)]
    for i, j in edges:
        adj[i].append(j)
        adj[j].append(i)

    def enc(v: int, parent: int) -> str:
        return "(" + str(weights[v]) + "".join(sorted(enc(w, v) for w in adj[v] if w != parent)) + ")"

    return min(enc(c, -1) for c in _centers(n, adj))


def _tree_from_pruefer(seq: Sequence[int], n: int) -> list[tuple]:
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    edges = []
    for v in seq:
        leaf = min(u for u in range(n) if degree[u] == 1)
        edges.append((leaf, v))
        degree[leaf] -= 1
        degree[v] -= 1
    u, w = [x for x in range(n) if degree[x] == 1]
    edges.append((u, w))
    return edges


def tree_shapes(n: int) -> list[list[tuple]]:
    """One edge list per unlabeled tree on ``n`` vertices, in canonical-string order."""
    if n == 1:
        return [[]]
    if n == 2:
        return [[(0, 1)]]
    shapes = {}
    for seq in itertools.product(range(n), repeat=n - 2):
        edges = _tree_from_pruefer(seq, n)
        key = canonical_form([0] * n, edges)
        shapes.setdefault(key, edges)
    return [shapes[k] for k in sorted(shapes)]


def enumerate_graphs(max_vertices: int, max_weight: int, rational_only: bool = True) -> Iterator[DualGraph]:
    """Every negative definite (and, by default, rational) weighted tree, once per isomorphism class."""
    if max_vertices < 1 or max_weight < 2:
        raise ValueError("need max_vertices >= 1 and max_weight >= 2")
    for n in range(1, max_vertices + 1):
        seen: dict[str, DualGraph] = {}
        for edges in tree_shapes(n):
            for weights in itertools.product(range(2, max_weight + 1), repeat=n):
                key = canonical_form(weights, edges)
                if key in seen:
                    continue
                try:
                    g = DualGraph(weights, tuple(edges))
                except NotNegativeDefiniteError:
                    seen[key] = None
                    continue
                seen[key] = g if (not rational_only or is_rational(g)) else None
        for key in sorted(seen):
            if seen[key] is not None:
                yield seen[key]


# ---------------------------------------------------------------------------
# reports


@dataclass
class MldReport:
    max_vertices: int
    max_weight: int
    graphs: int = 0
    per_multiplicity: Counter = field(default_factory=Counter)
    min_mld: dict = field(default_factory=dict)
    max_mld: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)
    equality_cases: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, g: DualGraph, m: int, value: Fraction) -> None:
        self.graphs += 1
        self.per_multiplicity[m] += 1
        self.min_mld[m] = min(self.min_mld.get(m, value), value)
        self.max_mld[m] = max(self.max_mld.get(m, value), value)
        if value == Fraction(2, m):
            self.equality_cases += 1
        if value > Fraction(2, m):
            self.violations.append({"graph": g.to_json(), "multiplicity": m, "mld": fmt(value)})

    def to_json(self) -> dict:
        return {
            "max_vertices": self.max_vertices,
            "max_weight": self.max_weight,
            "graphs": self.graphs,
            "per_multiplicity": {str(m): self.per_multiplicity[m] for m in sorted(self.per_multiplicity)},
            "mld_range": {str(m): [fmt(self.min_mld[m]), fmt(self.max_mld[m])] for m in sorted(self.min_mld)},
            "equality_cases": self.equality_cases,
            "violations": sorted(self.violations, key=lambda v: json.dumps(v, sort_keys=True)),
        }


def verify_mld_theorem(max_vertices: int, max_weight: int) -> MldReport:
    """Check ``mld <= 2/m`` on every enumerated rational graph."""
    report = MldReport(max_vertices, max_weight)
    for g in enumerate_graphs(max_vertices, max_weight):
        report.add(g, multiplicity(g), mld(g))
    return report


@dataclass
class MinusTwoReport:
    max_vertices: int
    max_weight: int
    instances: int = 0
    min_mld: Optional[Fraction] = None
    max_mld: Optional[Fraction] = None
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def summary(self) -> str:
        if not self.instances:
            return "no instances"
        return f"{self.instances} instances, mld in [{fmt(self.min_mld)}, {fmt(self.max_mld)}]"

    def to_json(self) -> dict:
        return {
            "max_vertices": self.max_vertices,
            "max_weight": self.max_weight,
            "instances": self.instances,
            "mld_range": None if not self.instances else [fmt(self.min_mld), fmt(self.max_mld)],
            "summary": self.summary,
            "violations": self.violations,
        }


def verify_m3_minus2_claim(max_vertices: int, max_weight: int) -> MinusTwoReport:
    """Multiplicity-3 graphs containing a (-2)-curve: report the mld range and check ``mld <= 2/3``."""
    report = MinusTwoReport(max_vertices, max_weight)
    for g in enumerate_graphs(max_vertices, max_weight):
        if 2 not in g.weights or multiplicity(g) != 3:
            continue
        value = mld(g)
        report.instances += 1
        report.min_mld = value if report.min_mld is None else min(report.min_mld, value)
        report.max_mld = value if report.max_mld is None else max(report.max_mld, value)
        if value > Fraction(2, 3):
            report.violations.append({"graph": g.to_json(), "mld": fmt(value)})
    return report
