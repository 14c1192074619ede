"""The inequality ledger for the dimension-5 case analysis.

Every displayed numeric inequality of the main proof becomes a :class:`Claim`:
an expression, a region, a threshold and a direction.  Claim ids follow the
proof's structure (``S6.1-*`` easy cases, ``S6.2-*`` divisor centers of
multiplicity two, ``S6.3-*`` singular threefold centers).

The multiplicity-two divisor analysis is parametrized by ``lam`` and
``p = lam * q``; in those variables all case boundaries are linear.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .bounds import (
    INTERCEPT_FAR,
    INTERCEPT_NEAR,
    SIGMA,
    SLOPE_FAR,
    SLOPE_NEAR,
    divisor_center_expr,
    intermediate_expr,
    main_lemma_expr,
    mu_min,
)
from .certify import Box, ExprConstraint, linear
from .exact import Enclosure, rat
from .expr import DEFAULT_EPS, Expr, Var, as_expr, emin_expr, root
from .volume import DEF_HI, DEF_LO, S_MAX, eta_prime, f_eta_expr, f_reciprocal_expr, vol_lower_expr

N = 5
C1 = INTERCEPT_FAR + SLOPE_FAR * SIGMA  # 3.23459609
C2 = INTERCEPT_NEAR + SLOPE_NEAR * SIGMA  # 5.73027116


@dataclass(frozen=True)
class Claim:
    id: str
    group: int
    expr: Expr
    box: Box
    threshold: Fraction
    strict: bool = True
    kind: str = "sup"  # "sup": sup expr < c ; "inf": inf expr > c
    anchor: str = ""
    note: str = ""
    # True when the box only encloses one unknown exact value (mu, eta');
    # a refutation must then hold on the whole box.
    uncertain: bool = False

    def __post_init__(self):
        object.__setattr__(self, "threshold", rat(self.threshold))
        if self.kind not in ("sup", "inf"):
            raise ValueError(f"kind must be 'sup' or 'inf', got {self.kind!r}")
        if not self.anchor:
            raise ValueError(f"claim {self.id} has no anchor")

    @property
    def relation(self) -> str:
        if self.kind == "sup":
            return "<" if self.strict else "<="
        return ">" if self.strict else ">="


def _c(x) -> Expr:
    return as_expr(rat(x))


POINT = Box.make({})

# ---------------------------------------------------------------------------
# multiplicity-two divisor center: regions in (lam, p)

lam, p = Var("lam"), Var("p")
K = root(2, 4) / SIGMA
B1 = 5 - p
B2 = 3 - C1 * lam + SLOPE_FAR * p
B3 = 3 - C2 * lam + SLOPE_NEAR * p


def r_expr(beta: Expr) -> Expr:
    return 1 - lam - beta * K


def final_expr(beta: Expr) -> Expr:
    """``2 / (r + 2K)``: the deficit estimate with target ``beta' = 2`` after substituting ``def = beta``."""
    return 2 / (r_expr(beta) + 2 * K)


def _lp(a, b) -> dict:
    return {"lam": rat(a), "p": rat(b)}


Q_GE_10 = linear(_lp(10, -1), "<=", 0)
Q_LE_10 = linear(_lp(10, -1), ">=", 0)
Q_GE_SIGMA = linear(_lp(SIGMA, -1), "<=", 0)
Q_GE_92 = linear(_lp("9.2", -1), "<=", 0)
Q_LE_922 = linear(_lp("9.22", -1), ">=", 0)
B1_GE_2 = linear(_lp(0, 1), "<=", 3)
B1_LE_2 = linear(_lp(0, 1), ">=", 3)
B2_GE_B1 = linear(_lp(-C1, 1 + SLOPE_FAR), ">=", 2)
B2_LE_B1 = linear(_lp(-C1, 1 + SLOPE_FAR), "<=", 2)
B2_GE_2 = linear(_lp(C1, -SLOPE_FAR), "<=", 1)
B3_GE_B1 = linear(_lp(-C2, 1 + SLOPE_NEAR), ">=", 2)
B3_LE_B1 = linear(_lp(-C2, 1 + SLOPE_NEAR), "<=", 2)
B3_GE_2 = linear(_lp(C2, -SLOPE_NEAR), "<=", 1)
B3_LE_2 = linear(_lp(C2, -SLOPE_NEAR), ">=", 1)

LP_RANGES = {"lam": (0, 1), "p": (0, 5)}


def lp_box(*constraints) -> Box:
    return Box.make(LP_RANGES, (Q_GE_SIGMA,) + constraints)


def _below_target(e: Expr, m: int, d: int) -> Expr:
    """``e - min(6 / m^(1/d), 6)``; the claim is that this is negative."""
    return e - emin_expr(6 / root(m, d), 6)


def _target(*pairs) -> Expr:
    return emin_expr(*[6 / root(m, d) for m, d in pairs])


def main(beta) -> Expr:
    return main_lemma_expr(SIGMA, N, _c(beta))


def inter(d: int, m: int, beta, beta_prime) -> Expr:
    return intermediate_expr(SIGMA, N, d, m, _c(beta), _c(beta_prime))


# ---------------------------------------------------------------------------
# enclosure-valued parameters


@lru_cache(maxsize=None)
def mu_enclosure(w: int, eps: Fraction) -> Enclosure:
    return mu_min(w, SIGMA, N, eps)


@lru_cache(maxsize=None)
def eta_enclosure(s: Fraction, deficit: Fraction, eps: Fraction) -> Enclosure:
    return eta_prime(s, deficit, eps)


def _mu_box(w: int, eps) -> Box:
    return Box.make({"mu": mu_enclosure(w, rat(eps))})


# ---------------------------------------------------------------------------
# the ledger


def _easy_cases(eps) -> list[Claim]:
    out = []
    add = out.append
    # (1) curve
    add(Claim("S6.1-curve", 1, main(1), POINT, 6, anchor="σ/(σ-5+1)<6"))
    # (2) surfaces
    add(Claim("S6.1-surface-m1", 2, _below_target(main(2), 1, 2), POINT, 0,
              anchor="2σ/(σ-5+2) < min{6/√mult, 6}", note="multiplicity 1, deficit at most 2"))
    for m in (2, 3):
        add(Claim(f"S6.1-surface-m{m}", 2, _below_target(main(1), m, 2), POINT, 0,
                  anchor="σ/(σ-5+1) < min{6/√mult, 6}", note=f"multiplicity {m}, deficit at most 1"))
    add(Claim("S6.1-surface-m4", 2, main(Fraction(1, 2)), POINT, "2.1",
              anchor="(σ/2)/(σ-5+1/2) < 2.1", note="deficit at most mld <= 1/2"))
    add(Claim("S6.1-surface-m4-target", 2, _target((4, 2)), POINT, "2.1", kind="inf",
              anchor="2.1 < min{6/√4, 6}"))
    # (3) smooth threefold center
    add(Claim("S6.1-smooth3fold-curve", 3, main(1), POINT, 6, anchor="σ/(σ-5+1)<6", note="Z1 a curve, beta = 1"))
    for m1 in (1, 2):
        add(Claim(f"S6.1-smooth3fold-surface-m{m1}", 3, _below_target(main(Fraction(2, m1)), m1, 2), POINT, 0,
                  anchor="σβ/(σ-5+β) < min{6/√(mult Z1), 6}", note=f"beta = 2/{m1}"))
    # (4) smooth divisor center
    for beta, bound in ((3, "4.6"), (2, "4.1"), (1, "3.1")):
        add(Claim(f"S6.1-smoothdiv-beta{beta}", 4, main(beta), POINT, bound, strict=False,
                  anchor=f"σβ/(σ-5+β) ≤ {bound}"))
    add(Claim("S6.1-smoothdiv-target-4.6", 4, _target((1, 3), (1, 1)), POINT, "4.6", kind="inf",
              anchor="4.6 < min{6/∛1, 6}"))
    add(Claim("S6.1-smoothdiv-target-4.1", 4, _target((2, 3), (1, 2)), POINT, "4.1", kind="inf",
              anchor="4.1 < min{6/∛2, 6/√1, 6}"))
    add(Claim("S6.1-smoothdiv-target-3.1", 4, _target((3, 3), (2, 2), (3, 2), (1, 1)), POINT, "3.1", kind="inf",
              anchor="3.1 < min{6/∛3, 6/√2, 6/√3, 6}"))
    add(Claim("S6.1-smoothdiv-Z2-m2", 4, main(1), POINT, "3.1", anchor="σβ/(σ-5+β) < 3.1 < 6/√2",
              note="beta_G2 <= 1"))
    add(Claim("S6.1-smoothdiv-Z2-m2-target", 4, _target((2, 2)), POINT, "3.1", kind="inf", anchor="3.1 < 6/√2"))
    add(Claim("S6.1-smoothdiv-Z2-m3", 4, inter(3, 2, 2, Fraction(2, 3)), POINT, "3.1",
              anchor="(2/3)/((σ-5+2)/σ - ∛2(2-2/3)/6) < 3.1",
              note="root term divided by sigma as in the general estimate; the printed display divides by 6"))
    add(Claim("S6.1-smoothdiv-Z2-m3-target", 4, _target((3, 2)), POINT, "3.1", kind="inf", anchor="3.1 < 6/√3"))
    # (5) divisor, multiplicity >= 3
    for w, bound in ((2, "0.0044"), (1, "0.0002")):
        add(Claim(f"S6.1-div-mu{w}", 5, Var("mu"), _mu_box(w, eps), bound, anchor=f"μ({w})<{bound}",
                  uncertain=True))
    for m, w in ((3, 2), (4, 1)):
        e = divisor_center_expr(N, m, Var("mu"), SIGMA)
        add(Claim(f"S6.1-div-m{m}", 5, e, _mu_box(w, eps), "2.1", anchor="((5-m)+μ(w)σ)/(1+μ(w)) < 2.1",
                  note=f"w = {w}", uncertain=True))
    add(Claim("S6.1-div-target", 5, _target((4, 2), (6, 3), (4, 4)), POINT, "2.1", kind="inf",
              anchor="2.1 < min{6/√4, 6/∛6, 6/∜4}"))
    return out


def _lemma_61() -> list[Claim]:
    out = []
    add = out.append
    r_anchor = "r(λ,def) ≥ 1-λ-def·∜2/σ"
    # Case 1: q >= 10 and def > 2
    reg_1a = lp_box(Q_GE_10, B2_GE_B1, B1_GE_2)
    reg_1b = lp_box(Q_GE_10, B2_LE_B1, B2_GE_2)
    add(Claim("S6.2-L61-case1a-r", 6, r_expr(B1), reg_1a, "0.2834", kind="inf", anchor=f"{r_anchor} > 0.2834",
              note="beta = 5 - lam q"))
    add(Claim("S6.2-L61-case1a", 6, final_expr(B1), reg_1a, "2.86", anchor="2/(0.2834+2∜2/σ) < 2.86"))
    add(Claim("S6.2-L61-case1a-lt3", 6, final_expr(B1), reg_1a, 3, anchor="def(G1)/(1-λ1) < 3",
              note="what the induction needs"))
    add(Claim("S6.2-L61-case1b-r", 6, r_expr(B2), reg_1b, "0.2834", kind="inf", anchor=f"{r_anchor} > 0.2834",
              note="beta = 3 - lam(3 - 0.0391(q - sigma))"))
    add(Claim("S6.2-L61-case1b", 6, final_expr(B2), reg_1b, "2.86", anchor="2/(0.2834+2∜2/σ) < 2.86"))
    add(Claim("S6.2-L61-case1b-lt3", 6, final_expr(B2), reg_1b, 3, anchor="def(G1)/(1-λ1) < 3",
              note="what the induction needs"))
    # Case 2: q >= 10 and def <= 2
    add(Claim("S6.2-L61-case2a", 6, 2 / (1 - lam), lp_box(Q_GE_10, B1_GE_2), Fraction(20, 7), strict=False,
              anchor="2/(1-λ) ≤ 20/7"))
    u = Var("u")
    add(Claim("S6.2-L61-case2b", 6, (5 - p) / (1 - p * u), Box.make({"u": (0, Fraction(1, 10)), "p": (3, 5)}),
              Fraction(20, 7), strict=False, anchor="(5-λq)/(1-λ) ≤ 2/(1-3/q) ≤ 20/7",
              note="u = 1/q so that lam = p u"))
    # Case 3: q <= 10 and def > 2
    reg_3a = lp_box(Q_LE_10, B3_GE_B1, B1_GE_2)
    add(Claim("S6.2-L61-case3a-r", 6, r_expr(B1), reg_3a, "0.2779", kind="inf", anchor=f"{r_anchor} > 0.2779"))
    add(Claim("S6.2-L61-case3a", 6, final_expr(B1), reg_3a, "2.97", anchor="2/(0.2779+2∜2/σ) < 2.97"))
    reg_3b1 = lp_box(Q_LE_10, B3_LE_B1, B3_GE_2, Q_GE_92)
    reg_3b2 = lp_box(Q_LE_10, B3_LE_B1, B3_GE_2, Q_LE_922)
    add(Claim("S6.2-L61-case3b1-r", 6, r_expr(B3), reg_3b1, "0.2779", kind="inf", anchor=f"{r_anchor} > 0.2779"))
    add(Claim("S6.2-L61-case3b1", 6, final_expr(B3), reg_3b1, "2.97", anchor="2/(0.2779+2∜2/σ) < 2.97"))
    shift = 1 / (SLOPE_NEAR * rat("9.22") - C2)
    add(Claim("S6.2-L61-case3b2-r", 6, r_expr(B3) + 2 * K - shift, reg_3b2, 1, strict=False, kind="inf",
              anchor="r > 1-2∜2/σ+1/(0.2884·9.22-5.73027116)",
              note="stated as r + 2K - 1/(0.2884*9.22 - C2) >= 1"))
    add(Claim("S6.2-L61-case3b2", 6, final_expr(B3), reg_3b2, "2.97",
              anchor="2/(1+1/(0.2884·9.22-5.73027116)) < 2.97"))
    # Case 4: q < 10 and def <= 2; def/(1 - lam) <= min(2, beta)/(1 - lam)
    two = 2 / (1 - lam)
    add(Claim("S6.2-L61-case4-i", 6, two, lp_box(Q_LE_10, B1_GE_2, B3_GE_B1), "2.97",
              anchor="2·9.2/(9.2-3) < 2.97"))
    add(Claim("S6.2-L61-case4-ii-1", 6, two, lp_box(Q_LE_10, B3_GE_2, B3_LE_B1, Q_GE_92), "2.98",
              anchor="2/(1-2/(1.2884·9.2-5.73027116)) < 2.98"))
    add(Claim("S6.2-L61-case4-ii-2", 6, two, lp_box(Q_LE_10, B3_GE_2, B3_LE_B1, Q_LE_922), "2.97",
              anchor="2/(1-1/(5.73027116-0.2884·9.22)) < 2.97"))
    add(Claim("S6.2-L61-case4-iii", 6, B1 / (1 - lam), lp_box(Q_LE_10, B1_LE_2, B3_GE_2), "2.97",
              anchor="(5-λq)/(1-λ) ≤ 2q/(q-3) < 2.97"))
    add(Claim("S6.2-L61-case4-iv", 6, B1 / (1 - lam), lp_box(Q_LE_10, B3_GE_B1, B3_LE_2), "2.98",
              anchor="(5·5.73027116-(1+5·0.2884)·9.2)/(4.73027116-0.2884·9.2) < 2.98",
              note="region claim; also covers q below the crossing of the two lambda bounds"))
    add(Claim("S6.2-L61-case4-v", 6, B3 / (1 - lam), lp_box(Q_LE_10, B3_LE_2, B1_GE_2), "2.97",
              anchor="(3-λ(5.7278712-0.288q))/(1-λ) ≤ 2/(1-1/(5.73027116-0.2884·9.2)) < 2.97"))
    add(Claim("S6.2-L61-case4-vi", 6, B3 / (1 - lam), lp_box(Q_LE_10, B3_LE_B1, B1_LE_2), "2.97",
              anchor="(3·9.22-3(5.73027116-0.2884·9.22))/(9.22-3) < 2.97"))
    return out


def _divisor_m2(eps) -> list[Claim]:
    out = [
        Claim("S6.2-mu3", 6, Var("mu"), _mu_box(3, eps), "0.0391", anchor="μ(3)<0.0391", uncertain=True),
        Claim("S6.2-mu3-bound", 6, divisor_center_expr(N, 2, Var("mu"), SIGMA), _mu_box(3, eps), "3.12",
              anchor="(3+μ(3)σ)/(1+μ(3)) < 3.12", uncertain=True),
        Claim("S6.2-mu3-target", 6, _target((2, 4)), POINT, "3.12", kind="inf", anchor="3.12 < 6/∜2"),
        Claim("S6.2-smooth-Z1-target", 6, _target((1, 1), (2, 2)), POINT, "3.12", kind="inf",
              anchor="3.12 < min{6, 6/√2}"),
        Claim("S6.2-singular-target", 6, _target((4, 2), (6, 3)), POINT, 3, strict=False, kind="inf",
              anchor="3 = min{6/√4, 6/∛6}"),
    ]
    return out + _lemma_61()


def _threefold(eps) -> list[Claim]:
    out = []
    add = out.append
    # (7) multiplicity >= 4
    add(Claim("S6.3-m4-main", 7, main(1), POINT, "3.1", anchor="σ/(σ-5+1) < 3.1"))
    add(Claim("S6.3-m4-target", 7, _target((6, 3)), POINT, "3.1", kind="inf", anchor="3.1 < 6/∛6"))
    add(Claim("S6.3-m4-Z1-surface-target", 7, _target((3, 2)), POINT, "3.1", kind="inf",
              anchor="3.1 < 6/√(mult Z1) for mult Z1 <= 3"))
    add(Claim("S6.3-m4-Z1-m4", 7, inter(3, 6, 1, Fraction(1, 2)), POINT, "2.75",
              anchor="(1/2)/((σ-5+1)/σ - ∛6(1-1/2)/σ) < 2.75", note="worst multiplicity m = 6"))
    add(Claim("S6.3-m4-Z1-m4-target", 7, _target((4, 2)), POINT, "2.75", kind="inf", anchor="2.75 < 6/√4 = 3"))
    # (8) multiplicity 2
    add(Claim("S6.3-m2-main", 8, main(2), POINT, "4.1", strict=False, anchor="2σ/(σ-5+2) ≤ 4.1"))
    add(Claim("S6.3-m2-target", 8, _target((2, 3)), POINT, "4.1", kind="inf", anchor="4.1 < 6/∛2"))
    for m1 in (1, 2, 3, 4):
        add(Claim(f"S6.3-m2-Z1-m{m1}", 8, _below_target(inter(3, 2, 2, Fraction(2, m1)), m1, 2), POINT, 0,
                  anchor="(2/m1)/((σ-5+2)/σ - ∛2(2-2/m1)/σ) < 6/√m1"))
    # (9) multiplicity 3
    add(Claim("S6.3-m3-main", 9, main(2), POINT, "4.1", strict=False, anchor="2σ/(σ-5+2) ≤ 4.1"))
    add(Claim("S6.3-m3-target", 9, _target((3, 3)), POINT, "4.1", kind="inf", anchor="4.1 < 6/∛3"))
    for m1 in (1, 2, 3):
        add(Claim(f"S6.3-m3-beta53-m{m1}", 9, _below_target(inter(3, 3, Fraction(5, 3), Fraction(2, m1)), m1, 2),
                  POINT, 0, anchor="(2/m1)/((σ-5+5/3)/σ - ∛3(5/3-2/m1)/σ) < 6/√m1"))
    add(Claim("S6.3-m3-beta85", 9, inter(3, 3, Fraction(8, 5), Fraction(1, 2)), POINT, 3,
              anchor="(2/4)/((σ-5+8/5)/σ - ∛3(8/5-2/4)/σ) < 3"))
    add(Claim("S6.3-m3-exhibit-3.05", 9, inter(3, 3, Fraction(5, 3), Fraction(1, 2)), POINT, "3.05",
              anchor="(2/4)/((σ-5+5/3)/σ - ∛3(5/3-2/4)/σ) < 3.05",
              note="informational: the same bound does not reach 3, see the next claim"))
    add(Claim("S6.3-m3-exhibit-not-below-3", 9, inter(3, 3, Fraction(5, 3), Fraction(1, 2)), POINT, 3,
              strict=False, kind="inf", anchor="≥ 3, short of < 3", note="shows why the volume argument is needed"))
    add(Claim("S6.3-lsc-a", 9, inter(3, 3, rat("1.63"), Fraction(1, 2)), POINT, 3,
              anchor="beta = 1.63 gives def(G1)/(1-λ1) < 3"))
    df, s = Var("def"), Var("s")
    add(Claim("S6.3-lsc-c", 9, 5 - 3 * df, Box.make({"def": (DEF_LO, DEF_HI)}), S_MAX, strict=False,
              anchor="s ≤ 5-3def ≤ 0.11"))
    add(Claim("S6.3-eta-lower", 9, Fraction(4, 3) * (1 - s), Box.make({"s": (0, S_MAX)}), DEF_LO,
              anchor="1.63 > 4/3(1-s)"))
    add(Claim("S6.3-eta-upper-floor", 9, 4 * (1 - s), Box.make({"s": (0, S_MAX)}), "3.56", strict=False,
              kind="inf", anchor="4(1-s) ≥ 3.56"))
    return out + _volume_finale(eps)


def _volume_finale(eps) -> list[Claim]:
    eps = rat(eps)
    out = []
    add = out.append
    df, s, eta, u = Var("def"), Var("s"), Var("eta"), Var("u")
    add(Claim("S6.3-f-large-eta", 9, f_reciprocal_expr(u, df),
              Box.make({"u": (0, 1 / rat("3.56")), "def": (DEF_LO, DEF_HI)}), 3,
              anchor="η ≥ 4(1-s) ≥ 3.56 ⇒ f(η,def) < 3", note="u = 1/eta covers every eta >= 3.56"))
    eta_end = eta_enclosure(S_MAX, DEF_HI, eps)
    endpoint = Box.make({"eta": eta_end})
    f_end = f_eta_expr(eta, DEF_HI)
    add(Claim("S6.3-g-endpoint", 9, f_end, endpoint, "2.98", strict=False, anchor="g(5/3) ≤ 2.98",
              note="g(def) = f(eta'(0.11, def), def)", uncertain=True))
    add(Claim("S6.3-g-endpoint-lt3", 9, f_end, endpoint, 3, anchor="g(5/3) < 3", note="what the induction needs",
              uncertain=True))
    vol = vol_lower_expr(eta, s, df)
    ranges = {"def": (DEF_LO, DEF_HI), "s": (0, S_MAX), "eta": (DEF_LO, 4)}
    base = (linear({"eta": 1, "s": 4}, "<=", 4), linear({"eta": 1, "def": -1}, ">=", 0))
    past_root = (ExprConstraint(vol, "<="),)  # eta at or beyond eta'(s, def)
    coupled = Box.make(ranges, base + (linear({"def": 3, "s": 1}, "<=", 5),), past_root)
    free = Box.make(ranges, base, past_root)
    add(Claim("S6.3-g-region", 9, f_eta_expr(eta, df), coupled, "2.98", strict=False,
              anchor="def(G')/(1-λ') ≤ g(5/3) ≤ 2.98",
              note="sup of f over eta in [eta'(s, def), 4(1-s)] with s <= 5 - 3 def"))
    add(Claim("S6.3-g-region-lt3", 9, f_eta_expr(eta, df), free, 3,
              anchor="def(G')/(1-λ') < 3", note="s and def ranging independently"))
    return out


def build_ledger(eps=DEFAULT_EPS) -> tuple[Claim, ...]:
    claims = _easy_cases(eps) + _divisor_m2(eps) + _threefold(eps)
    ids = [c.id for c in claims]
    if len(set(ids)) != len(ids):
        raise AssertionError("duplicate claim ids")
    return tuple(claims)


def negative_controls(eps=DEFAULT_EPS) -> tuple[Claim, ...]:
    """Deliberately tightened claims; each must come back Refuted."""
    reg_3a = lp_box(Q_LE_10, B3_GE_B1, B1_GE_2)
    return (
        Claim("NEG-curve-2.9", 0, main(1), POINT, "2.9", anchor="σ/(σ-5+1) < 2.9 (tightened)"),
        Claim("NEG-mu3-0.039", 0, Var("mu"), _mu_box(3, eps), "0.039", anchor="μ(3) < 0.039 (tightened)",
              uncertain=True),
        Claim("NEG-m4-Z1-2.74", 0, inter(3, 6, 1, Fraction(1, 2)), POINT, "2.74", anchor="< 2.74 (tightened)"),
        Claim("NEG-case3a-r-0.2782", 0, r_expr(B1), reg_3a, "0.2782", kind="inf", anchor="r > 0.2782 (tightened)"),
    )


# ---------------------------------------------------------------------------
# coverage manifest: every transcribed display and the claims realizing it


@dataclass(frozen=True)
class Display:
    section: str
    text: str
    claims: tuple = field(default_factory=tuple)


COVERAGE = (
    Display("easy cases / curve", "σ/(σ-5+1)<6", ("S6.1-curve",)),
    Display("easy cases / surface", "2σ/(σ-5+2), σ/(σ-5+1) < min{6/√m, 6}",
            ("S6.1-surface-m1", "S6.1-surface-m2", "S6.1-surface-m3")),
    Display("easy cases / surface", "(σ/2)/(σ-5+1/2) < 2.1 < min{6/√4, 6}",
            ("S6.1-surface-m4", "S6.1-surface-m4-target")),
    Display("easy cases / smooth threefold", "σ/(σ-5+1) < 6", ("S6.1-smooth3fold-curve",)),
    Display("easy cases / smooth threefold", "σβ/(σ-5+β) < min{6/√m1, 6}",
            ("S6.1-smooth3fold-surface-m1", "S6.1-smooth3fold-surface-m2")),
    Display("easy cases / smooth divisor", "σβ/(σ-5+β) ≤ 4.6, 4.1, 3.1 < min{6/m1^(1/d), 6}",
            ("S6.1-smoothdiv-beta3", "S6.1-smoothdiv-beta2", "S6.1-smoothdiv-beta1", "S6.1-smoothdiv-target-4.6",
             "S6.1-smoothdiv-target-4.1", "S6.1-smoothdiv-target-3.1")),
    Display("easy cases / smooth divisor", "< 3.1 < 6/√2", ("S6.1-smoothdiv-Z2-m2", "S6.1-smoothdiv-Z2-m2-target")),
    Display("easy cases / smooth divisor", "(2/3)/(...) < 3.1 < 6/√3",
            ("S6.1-smoothdiv-Z2-m3", "S6.1-smoothdiv-Z2-m3-target")),
    Display("easy cases / divisor m >= 3", "μ(2)<0.0044, μ(1)<0.0002", ("S6.1-div-mu2", "S6.1-div-mu1")),
    Display("easy cases / divisor m >= 3", "((5-m)+μ(w)σ)/(1+μ(w)) < 2.1 < min{...}",
            ("S6.1-div-m3", "S6.1-div-m4", "S6.1-div-target")),
    Display("divisor m = 2", "μ(3)<0.0391", ("S6.2-mu3",)),
    Display("divisor m = 2", "(3+μ(3)σ)/(1+μ(3)) < 3.12 < 6/∜2", ("S6.2-mu3-bound", "S6.2-mu3-target")),
    Display("divisor m = 2", "< 3.12 < min{6, 6/√2}", ("S6.2-smooth-Z1-target",)),
    Display("divisor m = 2", "< 3 = min{6/√4, 6/∛6}", ("S6.2-singular-target",)),
    Display("divisor m = 2 / case 1 (1)", "r > 0.2834, 2/(0.2834+2∜2/σ) < 2.86",
            ("S6.2-L61-case1a-r", "S6.2-L61-case1a", "S6.2-L61-case1a-lt3")),
    Display("divisor m = 2 / case 1 (2)", "r > 0.2834, 2/(0.2834+2∜2/σ) < 2.86",
            ("S6.2-L61-case1b-r", "S6.2-L61-case1b", "S6.2-L61-case1b-lt3")),
    Display("divisor m = 2 / case 2 (1)", "2/(1-λ) ≤ 20/7", ("S6.2-L61-case2a",)),
    Display("divisor m = 2 / case 2 (2)", "(5-λq)/(1-λ) ≤ 20/7", ("S6.2-L61-case2b",)),
    Display("divisor m = 2 / case 3 (1)", "r > 0.2779, < 2.97", ("S6.2-L61-case3a-r", "S6.2-L61-case3a")),
    Display("divisor m = 2 / case 3 (2)(1)", "r > 0.2779, < 2.97", ("S6.2-L61-case3b1-r", "S6.2-L61-case3b1")),
    Display("divisor m = 2 / case 3 (2)(2)", "r > 1-2∜2/σ+..., < 2.97", ("S6.2-L61-case3b2-r", "S6.2-L61-case3b2")),
    Display("divisor m = 2 / case 4 (1)", "< 2.97", ("S6.2-L61-case4-i",)),
    Display("divisor m = 2 / case 4 (2)(1)", "< 2.98", ("S6.2-L61-case4-ii-1",)),
    Display("divisor m = 2 / case 4 (2)(2)", "< 2.97", ("S6.2-L61-case4-ii-2",)),
    Display("divisor m = 2 / case 4 (3)", "< 2.97", ("S6.2-L61-case4-iii",)),
    Display("divisor m = 2 / case 4 (4)", "< 2.98", ("S6.2-L61-case4-iv",)),
    Display("divisor m = 2 / case 4 (5)", "< 2.97", ("S6.2-L61-case4-v",)),
    Display("divisor m = 2 / case 4 (6)", "< 2.97", ("S6.2-L61-case4-vi",)),
    Display("threefold m >= 4", "σ/(σ-5+1) < 3.1 < 6/∛6", ("S6.3-m4-main", "S6.3-m4-target")),
    Display("threefold m >= 4", "< 6/√(mult Z1), mult Z1 <= 3", ("S6.3-m4-Z1-surface-target",)),
    Display("threefold m >= 4", "(1/2)/(...) < 2.75 < 3", ("S6.3-m4-Z1-m4", "S6.3-m4-Z1-m4-target")),
    Display("threefold m = 2", "2σ/(σ-5+2) ≤ 4.1 < 6/∛2", ("S6.3-m2-main", "S6.3-m2-target")),
    Display("threefold m = 2", "(2/m1)/(...) < 6/√m1, m1 <= 4",
            ("S6.3-m2-Z1-m1", "S6.3-m2-Z1-m2", "S6.3-m2-Z1-m3", "S6.3-m2-Z1-m4")),
    Display("threefold m = 3", "2σ/(σ-5+2) ≤ 4.1 < 6/∛3", ("S6.3-m3-main", "S6.3-m3-target")),
    Display("threefold m = 3", "beta = 5/3: (2/m1)/(...) < 6/√m1, m1 <= 3",
            ("S6.3-m3-beta53-m1", "S6.3-m3-beta53-m2", "S6.3-m3-beta53-m3")),
    Display("threefold m = 3", "beta = 8/5: (2/4)/(...) < 3", ("S6.3-m3-beta85",)),
    Display("threefold m = 3", "(2/4)/(...) < 3.05", ("S6.3-m3-exhibit-3.05", "S6.3-m3-exhibit-not-below-3")),
    Display("threefold m = 3 / deficit window", "1.63 ≤ def ≤ 5/3, s ≤ 5-3def ≤ 0.11",
            ("S6.3-lsc-a", "S6.3-lsc-c")),
    Display("threefold m = 3 / volume", "η ≥ 1.63 > 4/3(1-s); 4(1-s) ≥ 3.56 ⇒ f < 3",
            ("S6.3-eta-lower", "S6.3-eta-upper-floor", "S6.3-f-large-eta")),
    Display("threefold m = 3 / volume", "g(5/3) ≤ 2.98",
            ("S6.3-g-endpoint", "S6.3-g-endpoint-lt3", "S6.3-g-region", "S6.3-g-region-lt3")),
)


def coverage_gaps(claims=None) -> list[str]:
    """Displays whose claim ids are missing from the ledger, and ledger claims no display mentions."""
    ids = {c.id for c in (claims if claims is not None else build_ledger())}
    problems = []
    mentioned = set()
    for d in COVERAGE:
        if not d.claims:
            problems.append(f"display without claims: {d.section}: {d.text}")
        for cid in d.claims:
            mentioned.add(cid)
            if cid not in ids:
                problems.append(f"missing claim {cid} for display {d.section}: {d.text}")
    problems += [f"claim {cid} not in the coverage manifest" for cid in sorted(ids - mentioned)]
    return problems


def find_claim(claim_id: str, eps=DEFAULT_EPS) -> Optional[Claim]:
    for c in build_ledger(eps) + negative_controls(eps):
        if c.id == claim_id:
            return c
    return None
