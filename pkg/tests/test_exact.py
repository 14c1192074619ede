from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from certledger.exact import (
    DomainError,
    Enclosure,
    IntervalDivisionError,
    Sign,
    certify_sign,
    emax,
    emin,
    iroot,
    nth_root,
    rat,
    root_enclosure,
)

small = st.fractions(min_value=-50, max_value=50, max_denominator=1000)
positive = st.fractions(min_value=Fraction(1, 1000), max_value=1000, max_denominator=1000)


@st.composite
def enclosures(draw, values=small):
    a, b = draw(values), draw(values)
    return Enclosure(min(a, b), max(a, b))


@st.composite
def enclosure_with_point(draw):
    e = draw(enclosures())
    t = draw(st.fractions(min_value=0, max_value=1, max_denominator=97))
    return e, e.lo + t * e.width


def test_rat_parses_decimals_exactly():
    assert rat("1.9999") == Fraction(19999, 10000)
    assert rat("3.23459609") == Fraction(323459609, 100000000)
    assert rat("5.73027116") == Fraction(573027116, 100000000)


def test_rat_rejects_floats():
    with pytest.raises(TypeError):
        rat(0.1)


def test_derived_sigma_constants():
    sigma = rat("5.9999")
    assert 3 + rat("0.0391") * sigma == rat("3.23459609")
    assert rat("3.9999") + rat("0.2884") * sigma == rat("5.73027116")


def test_interval_division_example():
    assert Enclosure(2, 3) / Enclosure(1, 2) == Enclosure(1, 3)


def test_division_by_zero_enclosure():
    with pytest.raises(IntervalDivisionError):
        Enclosure(1, 2) / Enclosure(-1, 1)


def test_empty_enclosure_rejected():
    with pytest.raises(ValueError):
        Enclosure(2, 1)


def test_even_power_straddling_zero():
    assert Enclosure(-2, 1) ** 2 == Enclosure(0, 4)
    assert Enclosure(-3, -1) ** 2 == Enclosure(1, 9)


def test_nth_root_perfect_power_is_exact():
    assert nth_root(Fraction(16), 4, Fraction(1, 10**6)) == Enclosure(2, 2)
    assert nth_root(Fraction(8, 27), 3, Fraction(1, 10**6)) == Enclosure(Fraction(2, 3), Fraction(2, 3))


def test_fourth_root_of_two_against_bisection():
    # independent oracle: bisection on floats bracketing 2 ** 0.25
    lo, hi = 1.0, 2.0
    for _ in range(60):
        mid = (lo + hi) / 2
        lo, hi = (mid, hi) if mid**4 < 2 else (lo, mid)
    enc = nth_root(Fraction(2), 4, Fraction(1, 10**6))
    assert enc.width <= Fraction(1, 10**6)
    assert enc.lo**4 <= 2 <= enc.hi**4
    assert float(enc.lo) <= hi and lo <= float(enc.hi)


def test_nth_root_domain():
    with pytest.raises(DomainError):
        nth_root(Fraction(-1), 2, Fraction(1, 100))
    with pytest.raises(DomainError):
        root_enclosure(Enclosure(-1, 4), 2, Fraction(1, 100))


def test_certify_sign():
    assert certify_sign(Enclosure(1, 2)) is Sign.POSITIVE
    assert certify_sign(Enclosure(-2, -1)) is Sign.NEGATIVE
    assert certify_sign(Enclosure(0, 0)) is Sign.ZERO
    assert certify_sign(Enclosure(-1, 1)) is Sign.UNKNOWN
    assert certify_sign(Enclosure(0, 1)) is Sign.UNKNOWN


def test_iroot_matches_integer_bisection():
    for k in range(0, 2000, 7):
        for n in (2, 3, 4, 5):
            r = iroot(k, n)
            assert r**n <= k < (r + 1) ** n


def test_huge_denominators_are_rounded_outward():
    x = Enclosure(Fraction(1, 3**300), Fraction(2, 3**300))
    y = x * x + x
    exact_lo = Fraction(1, 3**300) ** 2 + Fraction(1, 3**300)
    exact_hi = Fraction(2, 3**300) ** 2 + Fraction(2, 3**300)
    assert y.lo <= exact_lo and exact_hi <= y.hi
    assert y.lo.denominator.bit_length() <= 320 and y.hi.denominator.bit_length() <= 320


@given(enclosure_with_point(), enclosure_with_point(), st.sampled_from("+-*/"))
@settings(max_examples=400, deadline=None)
def test_arithmetic_is_sound(xa, yb, op):
    (x, a), (y, b) = xa, yb
    if op == "/" and y.contains_zero():
        with pytest.raises(IntervalDivisionError):
            x / y
        return
    exact = {"+": a + b, "-": a - b, "*": a * b, "/": a / b if b else None}[op]
    enc = {"+": lambda: x + y, "-": lambda: x - y, "*": lambda: x * y, "/": lambda: x / y}[op]()
    assert enc.contains(exact)


@given(enclosure_with_point(), st.integers(min_value=0, max_value=5))
@settings(deadline=None)
def test_power_is_sound(xa, k):
    x, a = xa
    assert (x**k).contains(a**k)


@given(enclosure_with_point(), enclosure_with_point())
def test_min_max_sound(xa, yb):
    (x, a), (y, b) = xa, yb
    assert emin(x, y).contains(min(a, b))
    assert emax(x, y).contains(max(a, b))


@given(enclosures(), enclosures())
def test_refining_inputs_refines_outputs(x, y):
    # a sub-enclosure of x gives a sub-enclosure of the result
    sub = Enclosure(x.lo, x.mid)
    for f in (lambda u: u + y, lambda u: u * y, lambda u: u - y, lambda u: u**3):
        assert f(sub).subset_of(f(x))


@given(positive, st.integers(min_value=1, max_value=6))
@settings(max_examples=200, deadline=None)
def test_nth_root_brackets(x, n):
    enc = nth_root(x, n, Fraction(1, 10**6))
    assert enc.lo**n <= x <= enc.hi**n
    assert enc.width <= Fraction(1, 10**6)


@given(small)
def test_fractions_stay_canonical(x):
    e = Enclosure.point(x) * 3 / 3
    assert e.lo == x
    assert e.lo.denominator > 0
