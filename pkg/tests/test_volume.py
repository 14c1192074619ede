from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from certledger import poly as P
from certledger.exact import DomainError, Enclosure, rat
from certledger.volume import (
    DEF_HI,
    DEF_LO,
    S_MAX,
    MacaulayRep,
    VolParams,
    binom,
    eta_prime,
    f_eta,
    g_increasing_certificate,
    g_value,
    h_breakpoint_checks,
    h_cartier_lower,
    h_lower,
    lengthdiv_identities,
    macaulay_decompose,
    macaulay_shift,
    verify_lengthdiv_cases,
    vol_lower,
    vol_poly,
)

SIGMA = rat("5.9999")


def all_reps(d: int, limit: int) -> dict:
    """Every strictly decreasing tuple c(d) > ... > c(1) >= 0 with value <= limit, by exhaustive search."""
    found: dict = {}

    def walk(i, upper, prefix, total):
        if i == 0:
            found.setdefault(total, []).append(tuple(prefix))
            return
        for c in range(0, upper):
            v = binom(c, i)
            if total + v > limit:
                break
            walk(i - 1, c, prefix + [c], total + v)

    walk(d, limit + d + 2, [], 0)
    return found


def test_macaulay_examples():
    assert macaulay_decompose(1, 1).coeffs == (1,)
    assert macaulay_decompose(10, 2).coeffs == (5, 0)
    assert macaulay_decompose(3, 2).coeffs == (3, 0)
    assert macaulay_shift(macaulay_decompose(10, 2)) == 6
    assert macaulay_shift(macaulay_decompose(1, 1)) == 0
    assert macaulay_shift(macaulay_decompose(3, 2)) == 1


def test_macaulay_rejects_non_decreasing():
    with pytest.raises(ValueError):
        MacaulayRep(2, (2, 3))


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_macaulay_unique_against_exhaustive_search(d):
    reps = all_reps(d, 200)
    for alpha in range(1, 201):
        assert reps[alpha] == [macaulay_decompose(alpha, d).coeffs]


def test_macaulay_roundtrip_large():
    for d in range(1, 6):
        for alpha in range(1, 10**4 + 1, 37):
            assert macaulay_decompose(alpha, d).value() == alpha


def test_macaulay_shift_monotone():
    for d in range(1, 5):
        shifts = [macaulay_shift(macaulay_decompose(a, d)) for a in range(1, 201)]
        assert shifts == sorted(shifts)


def test_h_breakpoints_exact():
    r = Fraction(3, 7)
    assert h_lower(4 * r, r) == Enclosure.point(8 * r * r)
    assert h_lower(2 * r, r) == Enclosure.point(4 * r * r)
    assert h_lower(Fraction(4, 3) * r, r) == Enclosure.point(Fraction(8, 3) * r * r)
    for _, value, exact in h_breakpoint_checks():
        assert value == Enclosure.point(exact)


@given(st.fractions(min_value=0, max_value=10, max_denominator=50),
       st.fractions(min_value=0, max_value=3, max_denominator=50),
       st.fractions(min_value=Fraction(1, 10), max_value=5, max_denominator=20))
def test_h_homogeneous_of_degree_two(t, r, lam):
    base = h_lower(t, r)
    scaled = h_lower(lam * t, lam * r)
    if base.is_point():
        assert scaled == Enclosure.point(lam * lam * base.lo)


def test_h_rejects_negative():
    with pytest.raises(DomainError):
        h_lower(-1, 1)


def test_h_cartier():
    assert h_cartier_lower(2, 1, 2, 1, 3) == Enclosure.point(0)
    assert h_cartier_lower(2, 1, 1, 1, 3) == Enclosure.point(1)
    lam = Fraction(5, 2)
    for n in (3, 4, 5):
        base = h_cartier_lower(3, 1, 1, 2, n)
        assert h_cartier_lower(3 * lam, lam, 1, 2, n) == Enclosure.point(lam ** (n - 1) * base.lo)
    with pytest.raises(DomainError):
        h_cartier_lower(1, 1, 2, 1, 3)


def simpson_volume(gamma, s, deficit, sigma=SIGMA):
    # Simpson's rule is exact on the quadratic integrand
    w = 1 - s

    def integrand(t):
        return 4 * w * w - 3 * (t - 2 * w) ** 2

    mid = (gamma + deficit) / 2
    integral = (gamma - deficit) / 6 * (integrand(deficit) + 4 * integrand(mid) + integrand(gamma))
    return (sigma - 5 + deficit) ** 3 - 3 * gamma**3 + integral


def test_vol_lower_hand_value():
    # s = 0, def = 5/3, gamma = 2: integral is 4/3 - 1/27
    expected = Fraction(79997, 30000) ** 3 - 24 + Fraction(35, 27)
    assert vol_lower(2, VolParams(0, Fraction(5, 3))) == Enclosure.point(expected)


def test_vol_lower_at_gamma_equal_def():
    d = Fraction(5, 3)
    assert vol_lower(d, VolParams(Fraction(1, 20), d)) == Enclosure.point((rat("0.9999") + d) ** 3 - 3 * d**3)


@given(st.fractions(min_value=0, max_value=S_MAX, max_denominator=200),
       st.fractions(min_value=DEF_LO, max_value=DEF_HI, max_denominator=300),
       st.fractions(min_value=0, max_value=2, max_denominator=100))
def test_vol_lower_matches_quadrature(s, deficit, extra):
    gamma = deficit + extra
    expected = simpson_volume(gamma, s, deficit)
    assert vol_lower(gamma, VolParams(s, deficit)) == Enclosure.point(expected)
    assert P.evaluate(vol_poly(s, deficit), gamma) == expected


def test_vol_lower_domain():
    with pytest.raises(DomainError):
        vol_lower(1, VolParams(0, Fraction(5, 3)))


def test_eta_prime_brackets_largest_root():
    eps = Fraction(1, 10**6)
    enc = eta_prime(S_MAX, DEF_HI, eps)
    assert enc.width <= eps
    cubic = vol_poly(S_MAX, DEF_HI)
    assert P.evaluate(cubic, enc.lo) >= 0 >= P.evaluate(cubic, enc.hi)
    assert P.count_roots(cubic, enc.hi, 4 * (1 - S_MAX)) == 0


@settings(max_examples=25, deadline=None)
@given(st.fractions(min_value=0, max_value=S_MAX, max_denominator=100),
       st.fractions(min_value=0, max_value=S_MAX, max_denominator=100))
def test_eta_prime_decreases_in_s(s1, s2):
    s1, s2 = min(s1, s2), max(s1, s2)
    eps = Fraction(1, 10**8)
    assert eta_prime(s1, DEF_HI, eps).hi >= eta_prime(s2, DEF_HI, eps).lo


def test_eta_prime_interval_parameters_contain_points():
    eps = Fraction(1, 10**6)
    whole = eta_prime(Enclosure(0, S_MAX), Enclosure(DEF_LO, DEF_HI), eps)
    for s in (0, S_MAX):
        for d in (DEF_LO, DEF_HI):
            assert eta_prime(s, d, eps).subset_of(whole)


def test_eta_prime_without_sign_change():
    # with sigma = 5 the volume is already negative at gamma = def
    with pytest.raises(DomainError):
        eta_prime(0, DEF_HI, sigma=5)


def test_f_at_eta_equal_def():
    d = Fraction(5, 3)
    assert f_eta(d, d) == Enclosure.point(d * SIGMA / (SIGMA - 5 + d))
    with pytest.raises(DomainError):
        f_eta(1, d)


def float_g(deficit: float, s: float = 0.11) -> float:
    """Float bisection for the root of the volume cubic, then f; an independent cross-check."""
    w = 1 - s

    def vol(g):
        return (0.9999 + deficit) ** 3 - 3 * g**3 + 4 * w * w * (g - deficit) - ((g - 2 * w) ** 3 - (deficit - 2 * w) ** 3)

    lo, hi = deficit, 4 * w
    for _ in range(200):
        mid = (lo + hi) / 2
        lo, hi = (mid, hi) if vol(mid) > 0 else (lo, mid)
    return 5.9999 * lo / (0.9999 + deficit) / (2 * (lo - deficit) + 1)


def test_g_endpoint_value():
    g, _ = g_value(DEF_HI, S_MAX, Fraction(1, 10**9))
    ref = float_g(5 / 3)
    assert float(g.lo) - 1e-9 <= ref <= float(g.hi) + 1e-9
    assert rat("2.9925") < g.lo and g.hi < rat("2.9926")


def test_g_increasing_certificate():
    assert g_increasing_certificate().ok


def test_lengthdiv_regimes():
    assert all(c.holds for c in lengthdiv_identities())
    results = verify_lengthdiv_cases()
    assert len(results) == 3 and all(cert.certified for _, cert in results)


@pytest.mark.parametrize("t", [2, 3, 4])
def test_lengthdiv_middle_regime_exact_points(t):
    t = Fraction(t)
    assert t * t - (8 - (t - 4) ** 2) >= 0
