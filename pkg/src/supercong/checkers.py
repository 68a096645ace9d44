"""Registry of executable congruence checks.

Each check evaluates one stated congruence at a prime p and returns a
:class:`CheckOutcome`.  Identifier prefixes: ``T`` theorems, ``L``
lemmas, ``C`` corollaries, ``R`` remarks, ``E`` displayed congruences,
``CJ`` conjectures, ``K2.8`` the Kelisky identity and ``ZW.A``/``ZW.B``
two quoted outside conjectures.  :func:`list_checks` pairs each id with
its location label.

Universally quantified variables (x, t, lambda, r) are sampled; see
:class:`CheckConfig`.  A check never inverts a p-divisible quantity:
such primes are reported as skipped.
"""
from __future__ import annotations

import enum
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from . import quadforms as qf
from .curve_count import CubicCurve, char_sum, point_count
from .legendre_poly import eval_exact, eval_many, eval_recurrence, murphy_coefficients
from .modmath import (
    P4_LIMIT,
    NotInvertibleError,
    PrimeContext,
    binom_mod,
    build_context,
    jacobi,
    legendre_symbol,
    mod_inv,
    poly_eval_many,
)
from .qseries import a_spec, b_spec, expand
from .series_sums import (
    ONE,
    SQUARE_K,
    TermFamily,
    apery_half,
    constant_ratio,
    falling,
    kelisky_lhs_exact,
    term_residues,
    weighted_sum,
    LINEAR_K,
)

F = TermFamily


class Status(str, enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    SKIPPED = "skipped"


class UnknownCheckError(KeyError):
    pass


@dataclass(frozen=True)
class AllResidues:
    pass


@dataclass(frozen=True)
class RandomSample:
    count: int
    seed: int = 0

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("sample count must be positive")


@dataclass(frozen=True)
class CheckConfig:
    """Sampling policy and limits.

    With ``x_sample=None`` every quantified variable is exhausted for
    small primes and randomly sampled above a threshold: x and r below
    ``exhaustive_below``, curve parameters (each costing one O(p)
    character sum) below ``curve_exhaustive_below``.  An explicit
    ``x_sample`` applies to every variable.  Draws are seeded from
    (seed, check id, p), so outcomes are reproducible.
    """

    x_sample: AllResidues | RandomSample | None = None
    seed: int = 0
    sample_count: int = 32
    exhaustive_below: int = 500
    curve_exhaustive_below: int = 300
    curve_samples: int = 16
    r_samples: int = 16
    lift_samples: int = 32
    qseries_N: int = 500
    p4_limit: int = P4_LIMIT


DEFAULT_CONFIG = CheckConfig()


@dataclass
class CheckOutcome:
    check: str
    p: int
    status: Status
    lhs: str = ""
    rhs: str = ""
    modulus: str = "p2"
    witness: dict[str, int] | None = None
    reason: str | None = None
    branch: str | None = None
    elapsed_ms: float = 0.0


@dataclass(frozen=True)
class CheckSpec:
    id: str
    location: str
    modulus: str
    hypotheses: str
    func: Callable = field(repr=False)
    n_max: Callable[[int], int] = field(repr=False)
    needs_p4: bool = False
    prime_free: bool = False


class _Skip(Exception):
    pass


class _Run:
    """Per-(check, prime) evaluation state handed to check functions."""

    def __init__(self, spec: CheckSpec, p: int, ctx: PrimeContext, cfg: CheckConfig):
        self.spec = spec
        self.p = p
        self.h = (p - 1) // 2
        self.ctx = ctx
        self.cfg = cfg
        # p^4 may be untabulated; the check's own gate then reports the skip
        usable = spec.modulus in ("p", "p2") or (spec.modulus == "p4" and ctx.p4 is not None)
        self.M = ctx.modulus(spec.modulus) if usable else None
        self.witness: dict[str, int] = {}
        self.branch: str | None = None

    # gates -------------------------------------------------------------
    def require(self, ok: bool, reason: str):
        if not ok:
            raise _Skip(reason)

    def units(self, *constants: int):
        for m in constants:
            if m % self.p == 0:
                raise _Skip(f"p divides constant {m}")

    # sampling ----------------------------------------------------------
    def sample(self, universe: Sequence[int], kind: str = "x") -> list[int]:
        universe = list(universe)
        policy = self.cfg.x_sample
        if policy is None:
            if kind == "curve":
                full, count = self.p < self.cfg.curve_exhaustive_below, self.cfg.curve_samples
            elif kind == "r":
                full, count = self.p < self.cfg.exhaustive_below, self.cfg.r_samples
            else:
                full, count = self.p < self.cfg.exhaustive_below, self.cfg.sample_count
            seed = self.cfg.seed
        elif isinstance(policy, AllResidues):
            full, count, seed = True, len(universe), self.cfg.seed
        else:
            full, count, seed = False, policy.count, policy.seed
        if full or count >= len(universe):
            return universe
        rng = random.Random(f"{seed}/{self.spec.id}/{self.p}/{kind}")
        return sorted(rng.sample(universe, count))

    def lifts(self) -> list[int]:
        rng = random.Random(f"{self.cfg.seed}/{self.spec.id}/{self.p}/lift")
        return [rng.randrange(self.ctx.p2) for _ in range(self.cfg.lift_samples)]

    # series helpers ----------------------------------------------------
    def terms(self, family: TermFamily, upper: int, modulus: int) -> tuple[int, ...]:
        return _cached_terms(self.ctx, family, upper, modulus)

    def series(self, family: TermFamily, m: int, upper: int, modulus: int | None = None,
               weight=ONE, start: int = 0) -> int:
        modulus = modulus or self.M
        self.units(m)
        ratio = constant_ratio(m, modulus)
        return weighted_sum(self.terms(family, upper, modulus), weight, ratio, modulus, start).value

    def coeffs(self, family: TermFamily, m: int, upper: int, modulus: int | None = None) -> list[int]:
        """term(k) / m^k for k = 0..upper, as polynomial coefficients."""
        modulus = modulus or self.M
        self.units(m)
        ratio = constant_ratio(m, modulus)
        out, power = [], 1
        for t in self.terms(family, upper, modulus):
            out.append(t * power % modulus)
            power = power * ratio % modulus
        return out

    def frac(self, num: int, den: int, modulus: int | None = None) -> int:
        modulus = modulus or self.M
        return num * mod_inv(den, modulus) % modulus

    def fact(self, n: int) -> int:
        # only for n < p, where n! is a unit
        return self.ctx.fact_units[n]

    def inv_fact(self, n: int) -> int:
        return self.ctx.inv_units[n]

    # representations ---------------------------------------------------
    def rep(self, form: qf.QuadForm, *names: str) -> qf.QuadRep:
        rep = qf.represent(self.p, form)
        if rep is None:
            raise ArithmeticError(f"p={self.p} has no representation by {form}")
        for name, value in zip(names, (rep.x, rep.y)):
            self.witness[name] = value
        return rep

    def sum_of_squares_a(self) -> int:
        """a with p = a^2 + b^2, a = 1 (mod 4)."""
        rep = qf.normalize_sign(qf.odd_even(qf.represent(self.p, qf.SUM_OF_SQUARES)), 1, 4)
        self.witness.update(a=rep.x, b=rep.y)
        return rep.x

    def odd_x(self) -> int:
        """x with p = x^2 + y^2 and x odd; only x^2 is used."""
        rep = qf.odd_even(qf.represent(self.p, qf.SUM_OF_SQUARES))
        self.witness.update(x=rep.x, y=rep.y)
        return rep.x

    # verdicts ----------------------------------------------------------
    def verdict(self, rows, var: str | None = None, modulus: int | None = None):
        """Each row is (point, [q0, ..., rhs]); holds iff every row is constant."""
        modulus = modulus or self.M
        rows = list(rows)
        for point, qs in rows:
            qs = [q % modulus for q in qs]
            rhs = qs[-1]
            bad = next((q for q in qs[:-1] if q != rhs), None)
            if bad is not None:
                if var is not None:
                    self.witness[var] = point
                return Status.FAILS, str(bad), str(rhs)
        point, qs = rows[0]
        if var is not None:
            self.witness[var] = point
            self.witness["samples"] = len(rows)
        return Status.HOLDS, str(qs[0] % modulus), str(qs[-1] % modulus)

    def equal(self, *qs: int, modulus: int | None = None):
        return self.verdict([(None, list(qs))], modulus=modulus)


@lru_cache(maxsize=32)
def _cached_terms(ctx: PrimeContext, family: TermFamily, upper: int, modulus: int) -> tuple[int, ...]:
    return tuple(term_residues(family, upper, ctx, modulus))


REGISTRY: dict[str, CheckSpec] = {}


def _check(id_, location, modulus, hypotheses, n_max, needs_p4=False, prime_free=False):
    def deco(func):
        REGISTRY[id_] = CheckSpec(id_, location, modulus, hypotheses, func, n_max, needs_p4, prime_free)
        return func
    return deco


def _eps(n: int) -> int:
    return -1 if n % 2 else 1


def _p3(p: int) -> int:
    return jacobi(p, 3)


# -------------------------------------------------------------------------
# central binomial series modulo p^2

@_check("E1.1", "Eq. (1.1)", "p2", "all odd p", lambda p: p - 1)
def _e11(r: _Run):
    return r.equal(r.series(F.CENTRAL_SQ, 16, r.h), _eps(r.h))


@_check("L2.2", "Lemma 2.2", "p4", "all odd p; p < 2^15 for p^4 arithmetic", lambda p: p - 1, needs_p4=True)
def _l22(r: _Run):
    r.require(r.p < r.cfg.p4_limit and r.ctx.fact_units4 is not None, "p^4 arithmetic disabled for p >= 2^15")
    M, p, h = r.M, r.p, r.h
    inv16 = mod_inv(-16 % M, M)
    rows, odd_sq, power = [], 0, 1
    for k in range(1, h + 1):
        inv = mod_inv(2 * k - 1, M)
        odd_sq = (odd_sq + inv * inv) % M
        power = power * inv16 % M
        lhs = binom_mod(h + k, 2 * k, M, r.ctx).value
        rhs = binom_mod(2 * k, k, M, r.ctx).value * power % M * (1 - p * p * odd_sq) % M
        rows.append((k, [lhs, rhs]))
    return r.verdict(rows, "k")


@_check("E2.2", "Eq. (2.2)", "p2", "odd p <= qseries_N", lambda p: p - 1)
def _e22(r: _Run):
    N = r.cfg.qseries_N
    r.require(r.p <= N, f"p > qseries_N = {N}")
    a_p = _eta(a_spec(N))[r.p]
    r.witness["a_p"] = a_p
    return r.equal(a_p, apery_half(r.ctx).value, r.series(F.CENTRAL_FOURTH, 256, r.h))


@_check("E2.3", "Eq. (2.3)", "p2", "odd p <= qseries_N", lambda p: p - 1)
def _e23(r: _Run):
    N = r.cfg.qseries_N
    r.require(r.p <= N, f"p > qseries_N = {N}")
    b_p = _eta(b_spec(N))[r.p]
    r.witness["b_p"] = b_p
    # summed from k = 0; the k = 0 term is 1
    return r.equal(r.series(F.CENTRAL_CUBE, 64, r.h), b_p)


@lru_cache(maxsize=4)
def _eta(spec) -> tuple[int, ...]:
    return tuple(expand(spec))


@_check("T2.1", "Theorem 2.1", "p2", "all odd p; x sampled mod p plus lifts mod p^2", lambda p: 2 * (p - 1))
def _t21(r: _Run):
    M, p, h = r.M, r.p, r.h
    xs = r.sample(range(p)) + r.lifts()
    full = r.coeffs(F.CENTRAL_SQ, 16, p - 1)
    sign = _eps(h)
    rows = []
    for upper in (h, p - 1):
        c = full[:upper + 1]
        at_x = poly_eval_many(c, xs, M)
        at_1mx = poly_eval_many(c, [1 - x for x in xs], M)
        rows += [((x, upper), [a - sign * b, 0]) for x, a, b in zip(xs, at_x, at_1mx)]
    status, lhs, rhs = r.verdict(rows, "x")
    point = r.witness.pop("x")
    r.witness.update(x=point[0], upper=point[1])
    return status, lhs, rhs


@_check("T2.2", "Theorem 2.2", "p2", "all odd p", lambda p: p - 1)
def _t22(r: _Run):
    s = r.series(F.CENTRAL_SQ, 32, r.h)
    if r.p % 4 == 3:
        r.branch = "4|p-3"
        return r.equal(s, 0)
    r.branch = "4|p-1"
    a = r.sum_of_squares_a()
    return r.equal(s, 2 * a - r.frac(r.p, 2 * a))


def _falling_closed(r: _Run, rr: int) -> int:
    """Closed form for sum C(2k,k)^2 (k)_rr / 32^k."""
    p, h = r.p, r.h
    if (p + 1 - 2 * rr) % 4 == 0:
        return 0
    sign = _eps((p - 1 + 2 * rr) // 4)
    value = sign * r.fact(h + rr) * r.inv_fact((p - 1 - 2 * rr) // 4) * r.inv_fact((p - 1 + 2 * rr) // 4)
    return value * mod_inv(pow(2, h, r.M), r.M) % r.M


@_check("T2.3", "Theorem 2.3", "p2", "all odd p; r sampled in [1, (p-1)/2]", lambda p: p - 1)
def _t23(r: _Run):
    M, h = r.M, r.h
    c = r.coeffs(F.CENTRAL_SQ, 32, h)
    rows = []
    for rr in r.sample(range(1, h + 1), "r"):
        # (k)_rr = k! / (k - rr)!, a unit because k < p
        weighted = [0] * rr + [c[k] * r.fact(k) % M * r.inv_fact(k - rr) % M for k in range(rr, h + 1)]
        rows.append((rr, [sum(weighted) % M, _falling_closed(r, rr)]))
    return r.verdict(rows, "r")


@_check("C2.1", "Corollary 2.1", "p2", "all odd p", lambda p: p - 1)
def _c21(r: _Run):
    p, h = r.p, r.h
    sq = r.series(F.CENTRAL_SQ, 32, h, weight=SQUARE_K)
    split = r.series(F.CENTRAL_SQ, 32, h, weight=falling(1)) + r.series(F.CENTRAL_SQ, 32, h, weight=falling(2))
    if p % 4 == 1:
        r.branch = "p=1 mod 4"
        top, lo, hi, sign = (p + 3) // 2, (p - 5) // 4, (p + 3) // 4, _eps((p + 3) // 4)
    else:
        r.branch = "p=3 mod 4"
        top, lo, hi, sign = (p + 1) // 2, (p - 3) // 4, (p + 1) // 4, _eps((p + 1) // 4)
    closed = sign * r.fact(top) * r.inv_fact(lo) * r.inv_fact(hi) * mod_inv(pow(2, h, r.M), r.M)
    return r.equal(sq, split, closed)


# -------------------------------------------------------------------------
# (3k)!/k!^3 series

@_check("T2.4", "Theorem 2.4", "p", "p > 3; x sampled mod p", lambda p: p - 1)
def _t24(r: _Run):
    r.require(r.p > 3, "requires p > 3")
    p, M = r.p, r.M
    c = r.coeffs(F.THREE_K, 27, p // 3)
    xs = r.sample(range(p))
    sign = _eps(p // 3)
    at_x = poly_eval_many(c, xs, M)
    at_1mx = poly_eval_many(c, [1 - x for x in xs], M)
    return r.verdict([(x, [a - sign * b, 0]) for x, a, b in zip(xs, at_x, at_1mx)], "x")


@_check("C2.2", "Corollary 2.2", "p", "p > 3", lambda p: p - 1)
def _c22(r: _Run):
    r.require(r.p > 3, "requires p > 3")
    return r.equal(r.series(F.THREE_K, 27, r.p // 3), _p3(r.p))


@_check("R2.2", "Remark 2.2", "p2", "p > 3", lambda p: 3 * (p - 1))
def _r22(r: _Run):
    r.require(r.p > 3, "requires p > 3")
    return r.equal(r.series(F.THREE_K, 27, r.p - 1), _p3(r.p))


@_check("L2.4", "Lemma 2.4", "p2", "all odd p", lambda p: p - 1)
def _l24(r: _Run):
    M, p, h = r.M, r.p, r.h
    inv4 = mod_inv(-4 % M, M)
    rows, odd, power = [], 0, 1
    for k in range(1, h + 1):
        odd = (odd + mod_inv(2 * k - 1, M)) % M
        power = power * inv4 % M
        lhs = binom_mod(h, k, M, r.ctx).value
        rhs = binom_mod(2 * k, k, M, r.ctx).value * power % M * (1 - p * odd) % M
        rows.append((k, [lhs, rhs]))
    return r.verdict(rows, "k")


@_check("T2.5a", "Theorem 2.5", "p", "p > 5", lambda p: p - 1)
def _t25a(r: _Run):
    r.require(r.p > 5, "requires p > 5")
    s = r.series(F.THREE_K, 54, r.p // 3)
    if r.p % 6 == 5:
        r.branch = "6|p-5"
        return r.equal(s, 0)
    r.branch = "6|p-1"
    rep = qf.normalize_sign(qf.represent(r.p, qf.X2_3Y2), 1, 3)
    r.witness.update(A=rep.x, B=rep.y)
    return r.equal(s, 2 * rep.x)


@_check("T2.5b", "Theorem 2.5", "p", "p > 5", lambda p: p - 1)
def _t25b(r: _Run):
    r.require(r.p > 5, "requires p > 5")
    p = r.p
    s = r.series(F.THREE_K, 54, p // 3, weight=LINEAR_K)
    if p % 6 == 1:
        r.branch = "6|p-1"
        return r.equal(s, 0)
    r.branch = "6|p-5"
    m = (p + 1) // 3
    closed = _eps((p + 1) // 6) * binom_mod(m, m // 2, p, r.ctx).value
    closed = r.frac(closed, 3 * pow(2, m, p))
    return r.equal(s, closed)


@_check("L2.5", "Lemma 2.5", "p2", "all odd p", lambda p: p - 1)
def _l25(r: _Run):
    M, p, h = r.M, r.p, r.h
    rows, odd = [], 0
    for k in range(1, h + 1):
        odd = (odd + mod_inv(2 * k - 1, M)) % M
        c_hk = binom_mod(h, k, M, r.ctx).value
        c_2k = binom_mod(2 * k, k, M, r.ctx).value
        ratio = _eps(k) * binom_mod(h + k, k, M, r.ctx).value * mod_inv(c_hk, M)
        third = 3 - 2 * pow(-4, k, M) * c_hk * mod_inv(c_2k, M)
        rows.append((k, [ratio, 1 + 2 * p * odd, third]))
    return r.verdict(rows, "k")


# -------------------------------------------------------------------------
# congruences modulo p in a variable x

@_check("T2.6", "Theorem 2.6", "p", "all odd p; x != -1 sampled mod p", lambda p: p - 1)
def _t26(r: _Run):
    p, h = r.p, r.h
    xs = r.sample([x for x in range(p) if x != p - 1])
    images = [(3 - x) * mod_inv(1 + x, p) % p for x in xs]
    lhs = eval_many(h, xs, r.ctx, p)
    rhs = eval_many(h, images, r.ctx, p)
    rows = [(x, [a, legendre_symbol(2 * (x + 1), p) * b]) for x, a, b in zip(xs, lhs, rhs)]
    return r.verdict(rows, "x")


@_check("C2.3", "Corollary 2.3", "p", "p = 3 mod 4", lambda p: p - 1)
def _c23(r: _Run):
    r.require(r.p % 4 == 3, "requires p = 3 mod 4")
    return r.equal(eval_recurrence(r.h, 3, r.ctx, r.p).value, 0)


@_check("T2.7", "Theorem 2.7", "p", "all odd p; x != 0 sampled mod p", lambda p: p - 1)
def _t27(r: _Run):
    p = r.p
    c = r.coeffs(F.CENTRAL_SQ, 16, r.h)
    xs = r.sample(range(1, p))
    at_x = poly_eval_many(c, xs, p)
    at_inv = poly_eval_many(c, [mod_inv(x, p) for x in xs], p)
    rows = [(x, [a - legendre_symbol(x, p) * b, 0]) for x, a, b in zip(xs, at_x, at_inv)]
    return r.verdict(rows, "x")


@_check("E2.7", "Eq. (2.7)", "p", "all odd p; x != 0, 1 sampled mod p", lambda p: p - 1)
def _e27(r: _Run):
    p = r.p
    c = r.terms(F.CENTRAL_SQ, r.h, p)
    xs = r.sample(range(2, p))
    lhs = poly_eval_many(c, [mod_inv(16 * x, p) for x in xs], p)
    rhs = poly_eval_many(c, [mod_inv(16 * (1 - x), p) for x in xs], p)
    rows = [(x, [a, legendre_symbol(x * (x - 1), p) * b]) for x, a, b in zip(xs, lhs, rhs)]
    return r.verdict(rows, "x")


@_check("T2.8", "Theorem 2.8", "p", "all odd p; x != 0 sampled mod p", lambda p: p - 1)
def _t28(r: _Run):
    p = r.p
    c = r.terms(F.CENTRAL_SQ, r.h, p)
    xs = r.sample(range(1, p))
    inv16 = mod_inv(16, p)
    lhs = poly_eval_many(c, [x * x * inv16 for x in xs], p)
    half = mod_inv(2, p)
    rhs = eval_many(r.h, [(x + mod_inv(x, p)) * half for x in xs], r.ctx, p)
    rows = [(x, [a, legendre_symbol(-x, p) * b]) for x, a, b in zip(xs, lhs, rhs)]
    return r.verdict(rows, "x")


@_check("K2.8", "Eq. (2.8)", "exact", "prime-independent; n <= 40, x in [1, 10]", lambda p: 0, prime_free=True)
def _k28(r: _Run):
    return _kelisky_table()


@lru_cache(maxsize=1)
def _kelisky_table():
    last = None
    for n in range(41):
        for x in range(1, 11):
            lhs = kelisky_lhs_exact(n, x)
            rhs = 4 ** n * x ** n * eval_exact(n, Fraction(x * x + 1, 2 * x))
            if rhs != lhs:
                return Status.FAILS, str(lhs), str(rhs), {"n": n, "x": x}
            last = (lhs, rhs)
    return Status.HOLDS, str(last[0]), str(last[1]), {"n": 40, "x": 10}


@_check("E2.9", "Eq. (2.9)", "p", "all odd p", lambda p: p - 1)
def _e29(r: _Run):
    p, h = r.p, r.h
    inv16 = mod_inv(16, p)
    rows = []
    for k in range(h + 1):
        lhs = binom_mod(p - 1 - 2 * k, h - k, p, r.ctx).value
        rhs = _eps(h) * binom_mod(2 * k, k, p, r.ctx).value * pow(inv16, k, p)
        rows.append((k, [lhs, rhs]))
    return r.verdict(rows, "k")


# -------------------------------------------------------------------------
# p = a^2 + b^2

@_check("T2.9", "Theorem 2.9", "p2", "p = 1 mod 4", lambda p: p - 1)
def _t29(r: _Run):
    r.require(r.p % 4 == 1, "requires p = 1 mod 4")
    a = r.sum_of_squares_a()
    s8 = r.series(F.CENTRAL_SQ, 8, r.h)
    s16 = r.series(F.CENTRAL_SQ, -16, r.h)
    P3 = eval_recurrence(r.h, 3, r.ctx, r.M).value
    closed = _eps((r.p - 1) // 4) * (2 * a - r.frac(r.p, 2 * a))
    return r.equal(s8, s16, P3, closed)


@_check("T2.10", "Theorem 2.10", "p2", "p = 1 mod 4", lambda p: p - 1)
def _t210(r: _Run):
    r.require(r.p % 4 == 1, "requires p = 1 mod 4")
    a = r.sum_of_squares_a()
    s = r.series(F.QUARTER, 256, (r.p - 1) // 4)
    sign = _eps((r.p - 1) // 4)
    closed = r.frac(1, 2) + sign * a - sign * r.frac(r.p, 4 * a)
    return r.equal(s, closed)


# -------------------------------------------------------------------------
# character sums

@_check("L2.6", "Lemma 2.6", "p", "p > 3; lambda != 0, 1 sampled mod p", lambda p: p - 1)
def _l26(r: _Run):
    r.require(r.p > 3, "requires p > 3")
    p, h = r.p, r.h
    lams = r.sample(range(2, p), "curve")
    rhs = poly_eval_many(murphy_coefficients(h, r.ctx, p), [-lam for lam in lams], p)
    rows = []
    for lam, b in zip(lams, rhs):
        lhs = p + 1 - point_count(p, CubicCurve.legendre_form(lam, p))
        rows.append((lam, [lhs, _eps(h) * b]))
    return r.verdict(rows, "lambda")


@_check("T2.11", "Theorem 2.11", "p", "p > 3; t sampled mod p", lambda p: p - 1)
def _t211(r: _Run):
    r.require(r.p > 3, "requires p > 3")
    p, h = r.p, r.h
    ts = r.sample(range(p), "curve")
    legendre_vals = eval_many(h, ts, r.ctx, p)
    inv32 = mod_inv(32, p)
    series_vals = poly_eval_many(r.terms(F.CENTRAL_SQ, h, p), [(1 - t) * inv32 for t in ts], p)
    sign = -legendre_symbol(-6, p)
    rows = []
    for t, a, b in zip(ts, legendre_vals, series_vals):
        curve = CubicCurve(0, -3 * (t * t + 3), 2 * t * (t * t - 9))
        rows.append((t, [a, b, sign * char_sum(p, curve)]))
    return r.verdict(rows, "t")


def _t212(point, m1, m2, scale2, scale3, curve):
    def run(r: _Run):
        r.require(r.p > 3, "requires p > 3")
        p, h = r.p, r.h
        return r.equal(
            eval_recurrence(h, point, r.ctx, p).value,
            r.series(F.CENTRAL_SQ, m1, h),
            scale2(p) * r.series(F.CENTRAL_SQ, m2, h),
            scale3(p) * char_sum(p, curve),
        )
    return run


_T212 = {
    "T2.12a": (-31, 1, 256, lambda p: 1, lambda p: -_p3(p), CubicCurve(0, -723, -7378)),
    "T2.12b": (33, -1, -256, lambda p: _eps((p - 1) // 2), lambda p: _eps((p + 1) // 2), CubicCurve(0, -91, 330)),
    "T2.12c": (-15, 2, 128, lambda p: legendre_symbol(2, p), lambda p: _eps((p + 1) // 2), CubicCurve(0, -19, -30)),
    "T2.12d": (9, -4, -64, lambda p: _eps((p - 1) // 2), lambda p: _eps((p + 1) // 2), CubicCurve(0, -7, 6)),
    "T2.12e": (5, -8, -32, lambda p: legendre_symbol(-2, p), lambda p: -_p3(p), CubicCurve(0, -21, 20)),
}
for _id, _args in _T212.items():
    _check(_id, "Theorem 2.12", "p", "p > 3", lambda p: p - 1)(_t212(*_args))


# -------------------------------------------------------------------------
# supercongruences tied to binary quadratic forms

def _four_x2(r: _Run, form: qf.QuadForm) -> int:
    rep = r.rep(form, "x", "y")
    return 4 * rep.x * rep.x - 2 * r.p


@_check("ZW.A", "Sec. 2 (quoted conjecture, (4k)!/256^k)", "p2", "p > 3", lambda p: 4 * (p - 1))
def _zwa(r: _Run):
    r.require(r.p > 3, "requires p > 3")
    s = r.series(F.FOUR_K, 256, r.p - 1)
    if r.p % 8 in (1, 3):
        r.branch = "p=1,3 mod 8"
        return r.equal(s, _four_x2(r, qf.X2_2Y2))
    r.branch = "p=5,7 mod 8"
    return r.equal(s, 0)


@_check("ZW.B", "Sec. 2 (quoted conjecture, C(2k,k)^3 and (4k)!/81^k)", "p2", "p != 2, 3, 7",
        lambda p: 4 * (p - 1))
def _zwb(r: _Run):
    r.units(81)
    r.require(r.p != 7, "requires p != 7")
    s1 = r.series(F.CENTRAL_CUBE, 1, r.p - 1)
    s2 = r.series(F.FOUR_K, 81, r.p - 1)
    if legendre_symbol(r.p, 7) == 1:
        r.branch = "(p|7)=1"
        return r.equal(s1, s2, _four_x2(r, qf.X2_7Y2))
    r.branch = "(p|7)=-1"
    return r.equal(s1, s2, 0)


def _conjecture(id_, family, m, gate, hypotheses, branchers):
    """A conjecture of the shape sum_{k<p} term(k)/m^k = closed form mod p^2.

    ``branchers`` is a list of (label, predicate(p), closed(r)) tried in order.
    """
    def run(r: _Run):
        r.units(m)
        gate(r)
        s = r.series(family, m, r.p - 1)
        for label, applies, closed in branchers:
            if applies(r.p):
                r.branch = label
                return r.equal(s, closed(r))
        raise ArithmeticError(f"no branch of {id_} applies to p={r.p}")

    n = int(id_[4:])
    _check(id_, f"Conjecture 2.{n}", "p2", hypotheses, lambda p: family.span * (p - 1))(run)


def _gt(bound):
    def gate(r: _Run):
        r.require(r.p > bound, f"requires p > {bound}")
    return gate


def _not_in(excluded):
    def gate(r: _Run):
        r.require(r.p not in excluded, "requires p not in {" + ", ".join(map(str, sorted(excluded))) + "}")
    return gate


def _zero(r: _Run) -> int:
    return 0


def _signed(symbol, form):
    def closed(r: _Run) -> int:
        return symbol(r.p) * _four_x2(r, form)
    return closed


def _mod(n, *residues):
    return lambda p: p % n in residues


def _cj21_closed(r: _Run) -> int:
    x = r.odd_x()
    return 4 * x * x - 2 * r.p


def _cj24_closed(r: _Run) -> int:
    return jacobi(r.p, 33) * _cj21_closed(r)


def _cj27_closed(r: _Run) -> int:
    rep = r.rep(qf.L2_27M2, "L", "M")
    return legendre_symbol(10, r.p) * (rep.x * rep.x - 2 * r.p)


def _cj211_second(r: _Run) -> int:
    rep = r.rep(qf.F3X2_5Y2, "x", "y")
    return 2 * r.p - 12 * rep.x * rep.x


def _qr7(p):
    return legendre_symbol(p, 7) == 1


def _nr7(p):
    return legendre_symbol(p, 7) == -1


_conjecture("CJ2.1", F.FOUR_K, 648, _gt(3), "p > 3", [
    ("p=1 mod 4", _mod(4, 1), _cj21_closed),
    ("p=3 mod 4", _mod(4, 3), _zero),
])
_conjecture("CJ2.2", F.FOUR_K, -144, _gt(3), "p > 3", [
    ("p=1 mod 3", _mod(3, 1), lambda r: _four_x2(r, qf.X2_3Y2)),
    ("p=2 mod 3", _mod(3, 2), _zero),
])
_conjecture("CJ2.3", F.FOUR_K, -3969, _not_in({2, 3, 7}), "p != 2, 3, 7", [
    ("p=1,2,4 mod 7", _mod(7, 1, 2, 4), lambda r: _four_x2(r, qf.X2_7Y2)),
    ("p=3,5,6 mod 7", _mod(7, 3, 5, 6), _zero),
])
_conjecture("CJ2.4", F.SIX_K, 66 ** 3, _not_in({2, 3, 11}), "p != 2, 3, 11", [
    ("4|p-1", _mod(4, 1), _cj24_closed),
    ("4|p-3", _mod(4, 3), _zero),
])
_conjecture("CJ2.5", F.SIX_K, 20 ** 3, _gt(5), "p > 5", [
    ("p=1,3 mod 8", _mod(8, 1, 3), _signed(lambda p: legendre_symbol(-5, p), qf.X2_2Y2)),
    ("p=5,7 mod 8", _mod(8, 5, 7), _zero),
])
_conjecture("CJ2.6", F.SIX_K, 54000, _gt(5), "p > 5", [
    ("3|p-1", _mod(3, 1), _signed(lambda p: legendre_symbol(p, 5), qf.X2_3Y2)),
    ("3|p-2", _mod(3, 2), _zero),
])
_conjecture("CJ2.7", F.SIX_K, -12288000, _gt(5), "p > 5", [
    ("p=1 mod 3", _mod(3, 1), _cj27_closed),
    ("p=2 mod 3", _mod(3, 2), _zero),
])
_conjecture("CJ2.8", F.SIX_K, (-15) ** 3, _gt(7), "p > 7", [
    ("(p|7)=1", _qr7, _signed(lambda p: jacobi(p, 15), qf.X2_7Y2)),
    ("(p|7)=-1", _nr7, _zero),
])
_conjecture("CJ2.9", F.SIX_K, 255 ** 3, _not_in({2, 3, 5, 7, 17}), "p != 2, 3, 5, 7, 17", [
    ("(p|7)=1", _qr7, _signed(lambda p: jacobi(p, 255), qf.X2_7Y2)),
    ("(p|7)=-1", _nr7, _zero),
])
_conjecture("CJ2.10", F.CENTRAL_SQ_3K, 1458, _gt(3), "p > 3", [
    ("p=1 mod 3", _mod(3, 1), lambda r: _four_x2(r, qf.X2_3Y2)),
    ("p=2 mod 3", _mod(3, 2), _zero),
])
_conjecture("CJ2.11", F.CENTRAL_SQ_3K, 15 ** 3, _gt(5), "p > 5", [
    ("p=1,4 mod 15", _mod(15, 1, 4), lambda r: _four_x2(r, qf.X2_15Y2)),
    ("p=2,8 mod 15", _mod(15, 2, 8), _cj211_second),
    ("p=7,11,13,14 mod 15", _mod(15, 7, 11, 13, 14), _zero),
])


@_check("CJ2.12", "Conjecture 2.12", "p2", "p > 5", lambda p: 3 * (p - 1))
def _cj212(r: _Run):
    r.require(r.p > 5, "requires p > 5")
    M, p = r.M, r.p
    s = r.series(F.CENTRAL_SQ_3K, -8640, p - 1)
    if p % 3 == 2:
        r.branch = "3|p-2"
        return r.equal(s, 0)
    rep = r.rep(qf.X2_3Y2, "x", "y")
    x, y = rep.x, rep.y
    if (x * y) % 5 == 0:
        r.branch = "3|p-1, 5|xy"
        return r.equal(s, 4 * x * x - 2 * p)
    # the two-sign value set is invariant under x -> -x, y -> -y
    r.branch = "3|p-1, 5!|xy"
    options = sorted({(p - 2 * x * x + 6 * x * y) % M, (p - 2 * x * x - 6 * x * y) % M})
    rhs = "{" + ",".join(map(str, options)) + "}"
    return (Status.HOLDS if s in options else Status.FAILS), str(s), rhs


def _cj213_closed(r: _Run) -> int:
    x = r.rep(qf.X2_3Y2, "x", "y").x
    return jacobi(x, 3) * (2 * x - r.frac(r.p, 2 * x))


_conjecture("CJ2.13", F.THREE_K, 54, _gt(3), "p > 3", [
    ("3|p-1", _mod(3, 1), _cj213_closed),
    ("3|p-2", _mod(3, 2), _zero),
])


# -------------------------------------------------------------------------
# listing order: the order the statements appear in the source
ORDER = (
    "E1.1", "L2.2", "E2.2", "E2.3", "T2.1", "T2.2", "T2.3", "C2.1", "T2.4", "C2.2", "R2.2",
    "L2.4", "T2.5a", "T2.5b", "L2.5", "T2.6", "C2.3", "T2.7", "E2.7", "T2.8", "K2.8", "E2.9",
    "T2.9", "T2.10", "L2.6", "T2.11", "T2.12a", "T2.12b", "T2.12c", "T2.12d", "T2.12e",
    "ZW.A", "ZW.B",
) + tuple(f"CJ2.{n}" for n in range(1, 14))
assert set(ORDER) == set(REGISTRY), set(ORDER) ^ set(REGISTRY)


def list_checks() -> list[tuple[str, str, str, str]]:
    """(id, location, modulus, hypotheses) for every check, in source order."""
    return [(s.id, s.location, s.modulus, s.hypotheses) for s in (REGISTRY[i] for i in ORDER)]


def get_spec(check_id: str) -> CheckSpec:
    try:
        return REGISTRY[check_id]
    except KeyError:
        raise UnknownCheckError(f"unknown check id {check_id!r}") from None


def context_for(p: int, ids: Sequence[str], cfg: CheckConfig = DEFAULT_CONFIG) -> PrimeContext:
    """One context large enough for every check in ``ids``."""
    specs = [get_spec(i) for i in ids]
    n_max = max([s.n_max(p) for s in specs] + [p - 1])
    with_p4 = any(s.needs_p4 for s in specs) and p < cfg.p4_limit
    return build_context(p, n_max, with_p4=with_p4)


def run_check(check_id: str, p: int, cfg: CheckConfig = DEFAULT_CONFIG,
              ctx: PrimeContext | None = None) -> CheckOutcome:
    """Evaluate one check at prime ``p``.

    Prime-independent checks (K2.8) are reported under p = 0.
    """
    spec = get_spec(check_id)
    start = time.perf_counter()
    if spec.prime_free:
        status, lhs, rhs, witness = spec.func(None)
        return CheckOutcome(spec.id, 0, status, lhs, rhs, spec.modulus, dict(witness),
                            elapsed_ms=(time.perf_counter() - start) * 1e3)
    if ctx is None or ctx.p != p:
        ctx = context_for(p, [check_id], cfg)
    run = _Run(spec, p, ctx, cfg)
    try:
        status, lhs, rhs = spec.func(run)
        reason = None
    except _Skip as exc:
        status, lhs, rhs, reason = Status.SKIPPED, "", "", str(exc)
    except NotInvertibleError as exc:
        status, lhs, rhs, reason = Status.SKIPPED, "", "", str(exc)
    witness = dict(run.witness) or None
    return CheckOutcome(spec.id, p, status, lhs, rhs, spec.modulus, witness, reason, run.branch,
                        (time.perf_counter() - start) * 1e3)


def run_all(p: int, cfg: CheckConfig = DEFAULT_CONFIG, ids: Sequence[str] | None = None) -> list[CheckOutcome]:
    """Every check (or ``ids``) at ``p``, sharing one context, in registry order."""
    ids = list(ORDER) if ids is None else [i for i in ORDER if i in set(ids)]
    prime_ids = [i for i in ids if not REGISTRY[i].prime_free]
    ctx = context_for(p, prime_ids, cfg) if prime_ids else None
    return [run_check(i, p, cfg, ctx) for i in ids]
