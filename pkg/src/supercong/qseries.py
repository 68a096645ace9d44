"""Coefficients of eta-type products q^a prod_n (1 - q^(dn))^e."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

MAX_TRUNCATION = 10 ** 6


@dataclass(frozen=True)
class EtaProductSpec:
    leading_power: int
    factors: tuple[tuple[int, int], ...]
    N: int

    def __post_init__(self):
        if self.leading_power < 1:
            raise ValueError("leading power must be positive")
        if any(d < 1 or e < 1 for d, e in self.factors):
            raise ValueError("periods and exponents must be positive")
        if self.N < self.leading_power:
            raise ValueError("truncation must reach the leading power")


def a_spec(N: int) -> EtaProductSpec:
    """q prod (1-q^(2n))^4 (1-q^(4n))^4, whose q^p coefficient matches the Apery sum."""
    return EtaProductSpec(1, ((2, 4), (4, 4)), N)


def b_spec(N: int) -> EtaProductSpec:
    """q prod (1-q^(4n))^6."""
    return EtaProductSpec(1, ((4, 6),), N)


def expand(spec: EtaProductSpec) -> list[int]:
    """Exact coefficients of q^0 .. q^N."""
    if spec.N > MAX_TRUNCATION:
        raise ValueError(f"truncation {spec.N} exceeds {MAX_TRUNCATION}")
    width = spec.N - spec.leading_power
    c = np.zeros(width + 1, dtype=object)
    c[0] = 1
    for d, e in spec.factors:
        for step in range(d, width + 1, d):
            for _ in range(e):
                # multiply by (1 - q^step); right side still holds the old values
                c[step:] = c[step:] - c[:-step]
    return [0] * spec.leading_power + [int(v) for v in c]


def dump_csv(coeffs, path) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "coefficient"])
        for n, v in enumerate(coeffs):
            w.writerow([n, v])
