"""Truncated hypergeometric-type sums modulo p and p^2.

Every summand family is a ratio of factorials, written as a tuple of
``(multiplier, exponent)`` pairs: ``((2, 2), (1, -4))`` is
(2k)!^2 / k!^4 = C(2k,k)^2.  Terms are assembled from the factorial
units and valuations of a :class:`PrimeContext`, so summands divisible
by p keep their correct residue mod p^2.

Constants that appear as powers are kept pre-expanded:

    ========  ==========  =======================
    check     family      constant m
    ========  ==========  =======================
    E1.1      CENTRAL_SQ  16
    T2.2      CENTRAL_SQ  32
    T2.9      CENTRAL_SQ  8, -16
    T2.10     QUARTER     256 (16^2)
    E2.2      CENTRAL_4   256 (4^4)
    E2.3      CENTRAL_CB  64 (4^3)
    R2.2      THREE_K     27
    T2.5      THREE_K     54
    CJ2.1-3   FOUR_K      648, -144, -3969
    CJ2.4     SIX_K       287496 (66^3)
    CJ2.5     SIX_K       8000 (20^3)
    CJ2.6     SIX_K       54000
    CJ2.7     SIX_K       -12288000
    CJ2.8     SIX_K       -3375 ((-15)^3)
    CJ2.9     SIX_K       16581375 (255^3)
    CJ2.10    CENTRAL_3K  1458
    CJ2.11    CENTRAL_3K  3375 (15^3)
    CJ2.12    CENTRAL_3K  -8640
    CJ2.13    THREE_K     54
    ========  ==========  =======================
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from math import comb

import numpy as np

from .modmath import (
    NUMPY_MODULUS_LIMIT,
    NotInvertibleError,
    PrimeContext,
    Residue,
    binom_mod,
    mod_inv,
    poly_eval_many,
)


class TermFamily(enum.Enum):
    CENTRAL_SQ = ((2, 2), (1, -4))
    CENTRAL_CUBE = ((2, 3), (1, -6))
    CENTRAL_FOURTH = ((2, 4), (1, -8))
    THREE_K = ((3, 1), (1, -3))
    FOUR_K = ((4, 1), (1, -4))
    SIX_K = ((6, 1), (3, -1), (1, -3))
    CENTRAL_SQ_3K = ((2, 1), (3, 1), (1, -5))
    QUARTER = ((4, 2), (2, -4))

    @property
    def factors(self) -> tuple[tuple[int, int], ...]:
        return self.value

    @property
    def span(self) -> int:
        """Largest factorial multiplier: terms up to k need n_max >= span*k."""
        return max(mult for mult, _ in self.value)


@dataclass(frozen=True)
class Weight:
    """Polynomial weight in k: ``one``, ``linear`` (k), ``square`` (k^2) or ``falling`` (k)_r."""

    kind: str = "one"
    r: int = 0

    def __post_init__(self):
        if self.kind not in ("one", "linear", "square", "falling"):
            raise ValueError(f"unknown weight kind {self.kind!r}")
        if self.kind == "falling" and self.r < 1:
            raise ValueError("falling weight needs r >= 1")

    def __call__(self, k: int) -> int:
        if self.kind == "one":
            return 1
        if self.kind == "linear":
            return k
        if self.kind == "square":
            return k * k
        out = 1
        for j in range(self.r):
            out *= k - j
        return out


ONE = Weight()
LINEAR_K = Weight("linear")
SQUARE_K = Weight("square")


def falling(r: int) -> Weight:
    return Weight("falling", r)


def _power_product(acc, base, exp, modulus):
    for _ in range(exp):
        acc = acc * base % modulus
    return acc


def term_residues(family: TermFamily, upper: int, ctx: PrimeContext, modulus: int) -> list[int]:
    """Residues of the integer terms k = 0..upper of ``family`` mod ``modulus``."""
    if modulus not in (ctx.p, ctx.p2):
        raise ValueError("series are evaluated modulo p or p^2")
    if family.span * upper > ctx.n_max:
        raise ValueError(
            f"{family.name} up to k={upper} needs n_max >= {family.span * upper}, have {ctx.n_max}"
        )
    p = ctx.p
    cutoff = 1 if modulus == p else 2
    if ctx.p2 < NUMPY_MODULUS_LIMIT:
        units, vals, inv = ctx.arrays()
        k = np.arange(upper + 1, dtype=np.int64)
        e = np.zeros(upper + 1, dtype=np.int64)
        u = np.ones(upper + 1, dtype=np.int64)
        for mult, exp in family.factors:
            idx = mult * k
            e += exp * vals[idx]
            u = _power_product(u, (units if exp > 0 else inv)[idx] % modulus, abs(exp), modulus)
        out = np.where(e >= cutoff, 0, np.where(e == 1, p * u % modulus, u))
        return out.tolist()
    units, vals, inv = ctx.fact_units, ctx.fact_vals, ctx.inv_units
    out = []
    for k in range(upper + 1):
        e = 0
        u = 1
        for mult, exp in family.factors:
            n = mult * k
            e += exp * vals[n]
            u = _power_product(u, units[n] if exp > 0 else inv[n], abs(exp), modulus)
        if e >= cutoff:
            out.append(0)
        elif e:
            out.append(p * u % modulus)
        else:
            out.append(u)
    return out


def weighted_sum(terms, weight: Weight, ratio: int, modulus: int, start: int = 0) -> Residue:
    """sum_{k >= start} weight(k) * terms[k] * ratio^k mod ``modulus``."""
    coeffs = [0] * start + [
        (terms[k] if weight.kind == "one" else weight(k) % modulus * terms[k]) % modulus
        for k in range(start, len(terms))
    ]
    return Residue(poly_eval_many(coeffs, [ratio], modulus)[0], modulus)


def constant_ratio(m: int, modulus: int) -> int:
    """1/m mod ``modulus``, with m canonicalised first (m may be negative)."""
    try:
        return mod_inv(m % modulus, modulus)
    except NotInvertibleError:
        raise NotInvertibleError(f"constant not invertible: {m}") from None


def series_sum(family: TermFamily, m: int, weight: Weight, upper: int, modulus: int,
               ctx: PrimeContext, *, start: int = 0) -> Residue:
    """sum_{k=start}^{upper} weight(k) * term(k) / m^k mod ``modulus``."""
    if m == 0:
        raise ValueError("m must be nonzero")
    ratio = constant_ratio(m, modulus)
    return weighted_sum(term_residues(family, upper, ctx, modulus), weight, ratio, modulus, start)


def apery_half(ctx: PrimeContext) -> Residue:
    """Apery number A((p-1)/2) = sum_k C(h+k,k)^2 C(h,k)^2 mod p^2."""
    h = (ctx.p - 1) // 2
    m = ctx.p2
    acc = 0
    for k in range(h + 1):
        v = binom_mod(h + k, k, m, ctx).value * binom_mod(h, k, m, ctx).value % m
        acc += v * v
    return Residue(acc % m, m)


def kelisky_lhs_exact(n: int, x: int) -> int:
    """sum_k C(2n-2k, n-k) C(2k, k) x^(2k), exactly."""
    if n > 200:
        raise ValueError("n exceeds exact-evaluation guard 200")
    if x == 0:
        raise ValueError("x must be nonzero")
    return sum(comb(2 * n - 2 * k, n - k) * comb(2 * k, k) * x ** (2 * k) for k in range(n + 1))
