"""Legendre polynomials P_n, exactly over Q and modulo p or p^2."""
from __future__ import annotations

from fractions import Fraction
from math import factorial

from .modmath import PrimeContext, Residue, binom_mod, mod_inv, poly_eval_many

EXACT_MAX_DEGREE = 200


def eval_recurrence(n: int, x: int, ctx: PrimeContext, modulus: int) -> Residue:
    """P_n(x) mod ``modulus`` via (n+1)P_{n+1} = (2n+1)x P_n - n P_{n-1}."""
    if n >= ctx.p:
        raise ValueError(f"recurrence needs n < p, got n={n}, p={ctx.p}")
    x = int(x) % modulus
    prev, cur = 1 % modulus, x
    if n == 0:
        return Residue(prev, modulus)
    tabulated = n <= ctx.n_max and modulus in (ctx.p, ctx.p2)
    for j in range(1, n):
        # 1/(j+1) = j! / (j+1)!, both units since j+1 < p
        inv = ctx.fact_units[j] * ctx.inv_units[j + 1] if tabulated else mod_inv(j + 1, modulus)
        nxt = ((2 * j + 1) * x * cur - j * prev) * inv % modulus
        prev, cur = cur, nxt
    return Residue(cur, modulus)


def murphy_coefficients(n: int, ctx: PrimeContext, modulus: int) -> list[int]:
    """Coefficients d_k = C(n,k) C(n+k,k) of P_n as a polynomial in (x-1)/2."""
    return [
        binom_mod(n, k, modulus, ctx).value * binom_mod(n + k, k, modulus, ctx).value % modulus
        for k in range(n + 1)
    ]


def eval_murphy(n: int, x: int, ctx: PrimeContext, modulus: int) -> Residue:
    """P_n(x) = sum_k C(n,k) C(n+k,k) ((x-1)/2)^k mod ``modulus``."""
    if 2 * n + 1 > ctx.p:
        raise ValueError(f"expansion needs n <= (p-1)/2, got n={n}, p={ctx.p}")
    y = (int(x) - 1) * mod_inv(2, modulus) % modulus
    acc = 0
    for d in reversed(murphy_coefficients(n, ctx, modulus)):
        acc = (acc * y + d) % modulus
    return Residue(acc, modulus)


def eval_many(n: int, xs, ctx: PrimeContext, modulus: int) -> list[int]:
    """Vectorised P_n at many points, through the (x-1)/2 expansion."""
    half = mod_inv(2, modulus)
    ys = [(int(x) - 1) * half % modulus for x in xs]
    return poly_eval_many(murphy_coefficients(n, ctx, modulus), ys, modulus)


def p_at_zero(n: int, ctx: PrimeContext, modulus: int) -> Residue:
    """P_n(0): zero for odd n, (-1)^(n/2) C(n, n/2) / 2^n for even n."""
    if n % 2:
        return Residue(0, modulus)
    half = n // 2
    c = binom_mod(n, half, modulus, ctx).value
    v = (-1) ** half * c * mod_inv(pow(2, n, modulus), modulus)
    return Residue(v % modulus, modulus)


def eval_exact(n: int, x) -> Fraction:
    """Exact rational P_n(x) from the explicit alternating sum."""
    if n > EXACT_MAX_DEGREE:
        raise ValueError(f"degree {n} exceeds exact-evaluation guard {EXACT_MAX_DEGREE}")
    x = Fraction(x)
    total = Fraction(0)
    for k in range(n // 2 + 1):
        c = factorial(2 * n - 2 * k) // (factorial(k) * factorial(n - k) * factorial(n - 2 * k))
        total += (-1) ** k * c * x ** (n - 2 * k)
    return total / 2 ** n
