import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from certledger import poly as P
from certledger.bounds import (
    SIGMA,
    DeficitBoundInputs,
    alpha_de,
    beta_de,
    divisor_center_bound,
    estofq_bound,
    intermediate_bound,
    main_lemma_bound,
    main_lemma_expr,
    mu_min,
    mu_poly,
    phi_lines,
    phi_lower,
    phi_lower_split,
)
from certledger.certify import Box, Direction, certify_monotone
from certledger.exact import DomainError, Enclosure, nth_root, rat
from certledger.expr import Var, evaluate

EPS = Fraction(1, 10**6)


def binom_real(top: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for i in range(k):
        out *= top - i
    return out / math.factorial(k)


def test_beta_trivial_multiplicity():
    for d, e in [(1, 3), (2, 4), (3, 7)]:
        assert beta_de(d, e, 1) == Enclosure.point(d)


def test_beta_exact_integer_root():
    assert beta_de(2, 4, 3) == Enclosure.point(1)


def test_beta_irrational_root():
    # (5 - y)(4 - y)/2 = 2  =>  y = (9 - sqrt 17)/2
    enc = beta_de(3, 5, 2, EPS)
    assert enc.width <= EPS
    s17 = nth_root(Fraction(17), 2, Fraction(1, 10**9))
    assert enc.lo <= (9 - s17.lo) / 2 and (9 - s17.hi) / 2 <= enc.hi
    assert binom_real(5 - enc.lo, 2) >= 2 >= binom_real(5 - enc.hi, 2)


def test_beta_out_of_range():
    with pytest.raises(DomainError):
        beta_de(3, 5, 7)


def test_alpha_table_dim3():
    assert [alpha_de(3, 5, m) for m in range(2, 7)] == [2, 2, 1, 1, 1]


def test_alpha_dim2():
    for m in range(2, 7):
        assert alpha_de(2, m + 1, m) == 1
    assert alpha_de(4, 6, 1) == 4


def test_beta_strictly_decreasing_in_m():
    for d in range(1, 5):
        for e in range(d + 1, 9):
            top = math.comb(e - 1, d - 1)
            encs = [beta_de(d, e, m, Fraction(1, 10**9)) for m in range(1, top + 1)]
            for a, b in zip(encs, encs[1:]):
                assert b.hi < a.lo


def test_alpha_at_most_d_minus_one():
    for d in range(1, 5):
        for e in range(d + 1, 9):
            for m in range(2, math.comb(e - 1, d - 1) + 1):
                assert alpha_de(d, e, m) <= d - 1


@pytest.mark.parametrize("w,bound", [(3, "0.0391"), (2, "0.0044"), (1, "0.0002")])
def test_mu_values(w, bound):
    enc = mu_min(w, SIGMA, 5, EPS)
    assert enc.hi < rat(bound) and enc.width <= EPS
    f = mu_poly(w, SIGMA, 5)
    assert P.evaluate(f, enc.hi) <= 0  # defining inequality holds at hi
    assert P.evaluate(f, enc.lo - Fraction(1, 10**12)) > 0  # and fails just below lo


def test_mu_zero_weight():
    assert mu_min(0) == Enclosure.point(0)


def test_main_lemma_examples():
    assert main_lemma_bound(SIGMA, 5, 1).hi < rat("3.1")
    assert main_lemma_bound(SIGMA, 5, Fraction(1, 2)).hi < rat("2.1")
    assert main_lemma_bound(6, 5, 1) == Enclosure.point(3)
    with pytest.raises(DomainError):
        main_lemma_bound(5, 5, 1)


def test_main_lemma_increasing_in_beta():
    box = Box.make({"beta": (Fraction(1, 100), 5)})
    cert = certify_monotone(main_lemma_expr(SIGMA, 5, Var("beta")), box, "beta", Direction.INCREASING)
    assert cert.certified


def test_phi_values():
    assert phi_lower(SIGMA) == Enclosure.point(rat("3.9999"))
    assert phi_lower(10) == Enclosure.point(rat("3.9999") - rat("0.2884") * rat("4.0001"))
    assert phi_lower(12) == Enclosure.point(3 - rat("0.0391") * (12 - SIGMA))
    assert phi_lower_split(12) == phi_lower(12)
    with pytest.raises(DomainError):
        phi_lower(5)


@given(st.fractions(min_value=SIGMA, max_value=30, max_denominator=10**4))
def test_phi_dominates_both_lines(q):
    far, near = phi_lines(Var("q"), SIGMA)
    env = {"q": Enclosure.point(q)}
    value = phi_lower(q)
    assert value.lo >= evaluate(far, env).hi and value.lo >= evaluate(near, env).hi


def test_phi_continuous_at_crossing():
    q = SIGMA + rat("0.9999") / (rat("0.2884") - rat("0.0391"))
    far, near = phi_lines(Var("q"), SIGMA)
    env = {"q": Enclosure.point(q)}
    assert evaluate(far, env) == evaluate(near, env) == phi_lower(q)


def extreme(d, m, beta, bp):
    beta = Fraction(beta)
    return DeficitBoundInputs(d, m, 5, SIGMA, (5 - beta) / SIGMA, beta, bp)


def test_estofq_at_main_lemma_extreme():
    inp = extreme(3, 6, 1, Fraction(1, 2))
    assert estofq_bound(inp, 1).hi < rat("2.75")
    assert estofq_bound(inp, 1).hull(intermediate_bound(inp)).width < Fraction(1, 10**6)


def test_estofq_multiplicity_three():
    inp = extreme(3, 3, Fraction(5, 3), Fraction(2, 3))
    assert estofq_bound(inp, Fraction(5, 3)).hi ** 2 < 12  # below 6/sqrt(3)


def test_estofq_small_branch_is_pass_through():
    inp = DeficitBoundInputs(3, 2, 5, SIGMA, Fraction(1, 4), 2, 1)
    assert estofq_bound(inp, Fraction(1, 2)) == Enclosure.point(Fraction(2, 3))


def test_intermediate_examples():
    assert intermediate_bound(DeficitBoundInputs(3, 2, 5, SIGMA, 0, 2, Fraction(2, 3))).hi < rat("3.1")
    assert intermediate_bound(DeficitBoundInputs(3, 6, 5, SIGMA, 0, 1, Fraction(1, 2))).hi < rat("2.75")


@given(st.fractions(min_value=Fraction(1, 10), max_value=4, max_denominator=100))
def test_intermediate_reduces_to_main_lemma(beta):
    inp = DeficitBoundInputs(2, 1, 5, SIGMA, 0, beta, beta)
    assert intermediate_bound(inp) == main_lemma_bound(SIGMA, 5, beta)


def test_inputs_validated():
    with pytest.raises(DomainError):
        DeficitBoundInputs(5, 1, 5, SIGMA, 0, 1, 1)
    with pytest.raises(DomainError):
        DeficitBoundInputs(2, 1, 5, SIGMA, 1, 1, 1)


def test_divisor_center_examples():
    mu3 = mu_min(3, eps=EPS)
    assert divisor_center_bound(5, 2, mu3).hi < rat("3.12")
    assert divisor_center_bound(5, 3, mu_min(2, eps=EPS)).hi < rat("2.1")
    tiny = Fraction(1, 10**12)
    assert abs(divisor_center_bound(5, 3, tiny).hi - 2) < Fraction(1, 10**10)
