"""Cubic character sums and point counts of y^2 = x^3 + c2 x^2 + c1 x + c0 over F_p."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


@dataclass(frozen=True)
class CubicCurve:
    c2: int
    c1: int
    c0: int

    def reduced(self, p: int) -> "CubicCurve":
        return CubicCurve(self.c2 % p, self.c1 % p, self.c0 % p)

    @classmethod
    def legendre_form(cls, lam: int, p: int) -> "CubicCurve":
        """y^2 = x(x-1)(x-lam) = x^3 - (1+lam) x^2 + lam x."""
        return cls(-(1 + lam), lam, 0).reduced(p)

    def discriminant(self) -> int:
        a, b, c = self.c2, self.c1, self.c0
        return a * a * b * b - 4 * b ** 3 - 4 * a ** 3 * c - 27 * c * c + 18 * a * b * c


@lru_cache(maxsize=8)
def quadratic_character(p: int) -> np.ndarray:
    """chi[v] = (v|p) for v in [0, p), from the table of squares."""
    chi = np.full(p, -1, dtype=np.int8)
    x = np.arange(p, dtype=np.int64)
    chi[x * x % p] = 1
    chi[0] = 0
    chi.flags.writeable = False
    return chi


def char_sum(p: int, curve: CubicCurve) -> int:
    """sum over x in F_p of ((x^3 + c2 x^2 + c1 x + c0) | p)."""
    c = curve.reduced(p)
    x = np.arange(p, dtype=np.int64)
    f = (x + c.c2) % p
    f = (f * x + c.c1) % p
    f = (f * x + c.c0) % p
    return int(quadratic_character(p)[f].sum(dtype=np.int64))


def point_count(p: int, curve: CubicCurve) -> int:
    """Projective point count p + 1 + char_sum."""
    return p + 1 + char_sum(p, curve)
