from fractions import Fraction
from math import comb, factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from supercong.legendre_poly import eval_exact
from supercong.modmath import NotInvertibleError, build_context
from supercong.series_sums import (
    LINEAR_K,
    ONE,
    SQUARE_K,
    TermFamily,
    Weight,
    apery_half,
    falling,
    kelisky_lhs_exact,
    series_sum,
    term_residues,
)

PRIMES = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]


def exact_term(family: TermFamily, k: int) -> int:
    num, den = 1, 1
    for mult, e in family.factors:
        f = factorial(mult * k)
        if e > 0:
            num *= f ** e
        else:
            den *= f ** -e
    assert num % den == 0
    return num // den


def exact_sum(family, m, weight, upper, start=0) -> Fraction:
    return sum(Fraction(weight(k) * exact_term(family, k), m ** k) for k in range(start, upper + 1))


def frac_mod(q: Fraction, mod: int) -> int:
    return q.numerator * pow(q.denominator, -1, mod) % mod


def test_examples():
    c5, c3, c7 = build_context(5), build_context(3), build_context(7)
    assert series_sum(TermFamily.CENTRAL_SQ, 16, ONE, 2, 25, c5).value == 1
    assert series_sum(TermFamily.CENTRAL_SQ, 16, ONE, 1, 9, c3).value == 8
    assert series_sum(TermFamily.CENTRAL_SQ, 32, ONE, 2, 25, c5).value == 12
    assert series_sum(TermFamily.THREE_K, 54, ONE, 2, 7, c7).value == 3
    for fam in TermFamily:
        assert series_sum(fam, 1000003, ONE, 0, 49, c7).value == 1


def test_family_shapes():
    assert exact_term(TermFamily.CENTRAL_SQ, 3) == comb(6, 3) ** 2
    assert exact_term(TermFamily.SIX_K, 2) == comb(12, 6) * comb(6, 2) * comb(4, 2)
    assert exact_term(TermFamily.CENTRAL_SQ_3K, 2) == comb(4, 2) ** 2 * comb(6, 2)
    assert exact_term(TermFamily.QUARTER, 2) == comb(8, 4) ** 2
    assert TermFamily.SIX_K.span == 6


@pytest.mark.parametrize("p", PRIMES)
@pytest.mark.parametrize("family", list(TermFamily))
def test_term_residues_match_exact(p, family):
    upper = p - 1
    n_max = family.span * upper
    ctx = build_context(p, n_max)
    for mod in (p, p * p):
        got = term_residues(family, upper, ctx, mod)
        assert got == [exact_term(family, k) % mod for k in range(upper + 1)]


@pytest.mark.parametrize("p", [5, 7, 11, 13, 29])
def test_term_valuations_nonnegative(p):
    ctx = build_context(p)
    for family in TermFamily:
        for k in range(p):
            e = sum(mult_e * ctx.fact_vals[mult * k] for mult, mult_e in family.factors)
            assert e >= 0


@given(st.sampled_from(PRIMES[1:]), st.sampled_from(list(TermFamily)),
       st.sampled_from([1, 16, 32, -144, 648, -3375, 287496]),
       st.sampled_from([ONE, LINEAR_K, SQUARE_K, falling(1), falling(2), falling(3)]), st.data())
def test_series_sum_matches_exact_rational(p, family, m, weight, data):
    if m % p == 0:
        return
    upper = data.draw(st.integers(0, (p - 1) // 2))
    ctx = build_context(p, family.span * upper + 1)
    want = frac_mod(exact_sum(family, m, weight, upper), p * p)
    assert series_sum(family, m, weight, upper, p * p, ctx).value == want


@pytest.mark.parametrize("p", PRIMES)
def test_truncation_equivalence(p):
    ctx = build_context(p)
    m = p * p
    full = series_sum(TermFamily.CENTRAL_SQ, 16, ONE, p - 1, m, ctx)
    half = series_sum(TermFamily.CENTRAL_SQ, 16, ONE, (p - 1) // 2, m, ctx)
    assert full == half


@pytest.mark.parametrize("p", PRIMES[1:])
def test_weight_composition(p):
    ctx = build_context(p)
    m = p * p
    for fam, c in ((TermFamily.CENTRAL_SQ, 16), (TermFamily.THREE_K, 27)):
        sq = series_sum(fam, c, SQUARE_K, (p - 1) // 2, m, ctx).value
        f2 = series_sum(fam, c, falling(2), (p - 1) // 2, m, ctx).value
        f1 = series_sum(fam, c, falling(1), (p - 1) // 2, m, ctx).value
        assert sq == (f2 + f1) % m


def test_weights():
    assert [falling(3)(k) for k in range(5)] == [0, 0, 0, 6, 24]
    assert SQUARE_K(7) == 49 and LINEAR_K(7) == 7 and ONE(7) == 1
    with pytest.raises(ValueError):
        Weight("cubic")


def test_constant_divisible_by_p():
    ctx = build_context(3)
    with pytest.raises(NotInvertibleError, match="constant not invertible"):
        series_sum(TermFamily.FOUR_K, 648, ONE, 1, 9, ctx)
    with pytest.raises(ValueError):
        series_sum(TermFamily.FOUR_K, 0, ONE, 1, 9, ctx)


def test_start_offset():
    ctx = build_context(7)
    whole = series_sum(TermFamily.CENTRAL_CUBE, 64, ONE, 3, 49, ctx).value
    tail = series_sum(TermFamily.CENTRAL_CUBE, 64, ONE, 3, 49, ctx, start=1).value
    assert (whole - tail) % 49 == 1


def apery(n: int) -> int:
    return sum(comb(n + k, k) ** 2 * comb(n, k) ** 2 for k in range(n + 1))


def test_apery_examples():
    assert apery(0) == 1
    assert apery_half(build_context(3)).value == 5
    assert apery_half(build_context(5)).value == 23


@pytest.mark.parametrize("p", PRIMES)
def test_apery_matches_bigint(p):
    assert apery_half(build_context(p)).value == apery((p - 1) // 2) % (p * p)


def test_kelisky_examples():
    assert kelisky_lhs_exact(0, 5) == 1
    assert kelisky_lhs_exact(1, 1) == 4
    assert kelisky_lhs_exact(2, 1) == 16


def test_kelisky_identity():
    for n in range(41):
        for x in range(1, 11):
            rhs = 4 ** n * x ** n * eval_exact(n, Fraction(x * x + 1, 2 * x))
            assert kelisky_lhs_exact(n, x) == rhs


def test_kelisky_guards():
    with pytest.raises(ValueError):
        kelisky_lhs_exact(201, 1)
    with pytest.raises(ValueError):
        kelisky_lhs_exact(3, 0)
