"""Exact modular arithmetic over p, p^2 and p^4.

Factorials are kept as a pair (unit, valuation) so that n! stays usable
modulo p^2 even when p divides it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import gcd

import numpy as np

WIDTH_LIMIT = 1 << 31
P4_LIMIT = 1 << 15

# numpy int64 paths need products of two residues below 2**63
NUMPY_MODULUS_LIMIT = 3_037_000_499


class NotInvertibleError(ArithmeticError):
    """Raised when an inverse is requested for an element sharing a factor with the modulus."""


@dataclass(frozen=True)
class FactorialDecomp:
    unit: int
    val: int


@dataclass(frozen=True)
class Residue:
    value: int
    modulus: int

    def __post_init__(self):
        if not 0 <= self.value < self.modulus:
            raise ValueError(f"residue {self.value} out of range for modulus {self.modulus}")

    def __int__(self):
        return self.value


@dataclass(frozen=True, eq=False)
class PrimeContext:
    """Factorial tables for one odd prime.

    ``fact_units[n]`` is the p-free part of n! reduced mod p^2 and
    ``fact_vals[n]`` its p-adic valuation.  When ``p < 2**15`` the same
    units are also kept mod p^4 (``fact_units4``) for the p^4 binomial
    congruences.
    """

    p: int
    n_max: int
    p2: int
    p4: int | None
    fact_units: list[int] = field(repr=False)
    fact_vals: list[int] = field(repr=False)
    inv_units: list[int] = field(repr=False)
    fact_units4: list[int] | None = field(default=None, repr=False)
    inv_units4: list[int] | None = field(default=None, repr=False)

    def modulus(self, name: str) -> int:
        """Map ``"p"``, ``"p2"`` or ``"p4"`` to the integer modulus."""
        if name == "p":
            return self.p
        if name == "p2":
            return self.p2
        if name == "p4":
            if self.p4 is None:
                raise ValueError(f"p^4 arithmetic unavailable for p={self.p}")
            return self.p4
        raise ValueError(f"unknown modulus name {name!r}")

    def factorial(self, n: int) -> FactorialDecomp:
        return FactorialDecomp(self.fact_units[n], self.fact_vals[n])

    @cached_property
    def _arrays(self):
        return (np.asarray(self.fact_units, dtype=np.int64),
                np.asarray(self.fact_vals, dtype=np.int64),
                np.asarray(self.inv_units, dtype=np.int64))

    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """int64 copies of (fact_units, fact_vals, inv_units); only valid for p^2 < 2**31.5."""
        return self._arrays


def _unit_tables(p: int, n_max: int, m: int) -> tuple[list[int], list[int], list[int]]:
    units = [1] * (n_max + 1)
    vals = [0] * (n_max + 1)
    u = 1
    v = 0
    for block in range(0, n_max + 1, p):
        for n in range(block + 1, min(block + p, n_max + 1)):
            u = u * n % m
            units[n] = u
            vals[n] = v
        nxt = block + p
        if nxt <= n_max:
            q = nxt // p
            v += 1
            while q % p == 0:
                q //= p
                v += 1
            u = u * q % m
            units[nxt] = u
            vals[nxt] = v
    inv = [1] * (n_max + 1)
    w = pow(units[n_max], -1, m)
    for n in range(n_max, 0, -1):
        inv[n] = w
        q = n
        while q % p == 0:
            q //= p
        w = w * q % m
    return units, vals, inv


def build_context(p: int, n_max: int | None = None, *, with_p4: bool = False) -> PrimeContext:
    """Tabulate factorial units and valuations for ``0 <= n <= n_max``.

    ``n_max`` defaults to ``6*(p-1)``, enough for (6k)! with k < p.
    Callers with smaller needs may pass a smaller bound.  ``with_p4``
    additionally tabulates the units mod p^4 (only for p < 2**15).
    """
    if p == 2 or p < 2 or p % 2 == 0:
        raise ValueError(f"p must be an odd prime, got {p}")
    if p >= WIDTH_LIMIT:
        raise OverflowError(f"p={p} too large: p^2 must fit in 62 bits")
    if n_max is None:
        n_max = 6 * (p - 1)
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    p2 = p * p
    p4 = p2 * p2 if p < P4_LIMIT else None
    units, vals, inv = _unit_tables(p, n_max, p2)
    units4 = inv4 = None
    if with_p4 and p4 is not None:
        units4, _, inv4 = _unit_tables(p, n_max, p4)
    return PrimeContext(p, n_max, p2, p4, units, vals, inv, units4, inv4)


def legendre_symbol(a: int, p: int) -> int:
    """Legendre symbol (a|p) for an odd prime p via Euler's criterion."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a|n) for odd positive n."""
    if n <= 0 or n % 2 == 0:
        raise ValueError("n must be odd and positive")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def mod_inv(a: int, m: int) -> int:
    """Inverse of ``a`` modulo ``m`` by the extended Euclidean algorithm."""
    a %= m
    if m == 1:
        return 0
    old_r, r = a, m
    old_s, s = 1, 0
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
    if old_r != 1:
        raise NotInvertibleError(f"{a} is not invertible modulo {m} (gcd {gcd(a, m)})")
    return old_s % m


def _tables_for(ctx: PrimeContext, m: int) -> tuple[list[int], list[int]]:
    if m in (ctx.p, ctx.p2):
        return ctx.fact_units, ctx.inv_units
    if m == ctx.p4 and ctx.fact_units4 is not None:
        return ctx.fact_units4, ctx.inv_units4
    raise ValueError(f"modulus {m} not available in context for p={ctx.p}")


def binom_mod(n: int, k: int, modulus: int, ctx: PrimeContext) -> Residue:
    """C(n, k) mod ``modulus`` (p, p^2, or p^4 when tabulated)."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    if n > ctx.n_max:
        raise ValueError(f"n={n} exceeds tabulated n_max={ctx.n_max}")
    units, inv = _tables_for(ctx, modulus)
    e = ctx.fact_vals[n] - ctx.fact_vals[k] - ctx.fact_vals[n - k]
    scale = pow(ctx.p, e, modulus)
    if scale == 0:
        return Residue(0, modulus)
    u = units[n] * inv[k] % modulus * inv[n - k] % modulus
    return Residue(scale * u % modulus, modulus)


def odd_harmonic_sums(k: int, ctx: PrimeContext, modulus: int) -> tuple[Residue, Residue]:
    """Return (sum 1/(2i-1), sum 1/(2i-1)^2) for i = 1..k, mod ``modulus``."""
    if k > 0 and 2 * k - 1 >= ctx.p:
        raise NotInvertibleError(f"denominator {ctx.p} appears for k={k}")
    s1 = s2 = 0
    for i in range(1, k + 1):
        inv = mod_inv(2 * i - 1, modulus)
        s1 += inv
        s2 += inv * inv
    return Residue(s1 % modulus, modulus), Residue(s2 % modulus, modulus)


def poly_eval_many(coeffs, xs, m: int) -> list[int]:
    """Evaluate sum coeffs[k] * x**k mod m at every x in ``xs``.

    Uses an int64 power table built by doubling when ``m`` is small
    enough, otherwise Horner's rule on Python integers.
    """
    xs = [int(x) % m for x in xs]
    n = len(coeffs)
    if not xs:
        return []
    if n == 0:
        return [0] * len(xs)
    if m >= NUMPY_MODULUS_LIMIT or n * m >= (1 << 63):
        out = []
        for x in xs:
            acc = 0
            for c in reversed(coeffs):
                acc = (acc * x + c) % m
            out.append(acc)
        return out
    c = np.asarray([int(v) % m for v in coeffs], dtype=np.int64)
    x_all = np.asarray(xs, dtype=np.int64)
    rows = max(1, (1 << 21) // n)
    out = np.empty(len(xs), dtype=np.int64)
    for start in range(0, len(xs), rows):
        x = x_all[start:start + rows]
        pw = np.empty((len(x), n), dtype=np.int64)
        pw[:, 0] = 1 % m
        filled = 1
        base = x.copy()
        while filled < n:
            take = min(filled, n - filled)
            np.multiply(pw[:, :take], base[:, None], out=pw[:, filled:filled + take])
            pw[:, filled:filled + take] %= m
            base = base * base % m
            filled += take
        pw *= c
        pw %= m
        out[start:start + rows] = pw.sum(axis=1) % m
    return out.tolist()
