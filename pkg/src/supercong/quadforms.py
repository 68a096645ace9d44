"""Representations of primes by diagonal binary quadratic forms."""
from __future__ import annotations

from dataclasses import dataclass, replace
from math import isqrt

from .modmath import legendre_symbol, mod_inv


@dataclass(frozen=True)
class QuadForm:
    """The form a*x^2 + b*y^2 representing scale*p."""

    a: int
    b: int
    scale: int = 1

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * y * y

    def __str__(self):
        lhs = f"{self.a if self.a > 1 else ''}x^2+{self.b}y^2"
        return lhs if self.scale == 1 else f"{self.scale}p={lhs}"


SUM_OF_SQUARES = QuadForm(1, 1)
X2_2Y2 = QuadForm(1, 2)
X2_3Y2 = QuadForm(1, 3)
X2_7Y2 = QuadForm(1, 7)
X2_15Y2 = QuadForm(1, 15)
F3X2_5Y2 = QuadForm(3, 5)
L2_27M2 = QuadForm(1, 27, scale=4)

FORMS = (SUM_OF_SQUARES, X2_2Y2, X2_3Y2, X2_7Y2, X2_15Y2, F3X2_5Y2, L2_27M2)


@dataclass(frozen=True)
class QuadRep:
    x: int
    y: int
    form: QuadForm

    def __post_init__(self):
        if self.form(self.x, self.y) % self.form.scale:
            raise ValueError(f"{self} does not represent a multiple of {self.form.scale}")

    @property
    def n(self) -> int:
        """The represented prime."""
        return self.form(self.x, self.y) // self.form.scale


def sqrt_mod_prime(a: int, p: int) -> int | None:
    """A square root of ``a`` modulo an odd prime ``p`` (Tonelli-Shanks), or None."""
    a %= p
    if a == 0:
        return 0
    if legendre_symbol(a, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre_symbol(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def cornacchia(d: int, p: int) -> tuple[int, int] | None:
    """Solve x^2 + d*y^2 = p for an odd prime p not dividing d."""
    r = sqrt_mod_prime(-d, p)
    if r is None:
        return None
    if 2 * r < p:
        r = p - r
    a, b = p, r
    limit = isqrt(p)
    while b > limit:
        a, b = b, a % b
    rest = p - b * b
    if rest % d:
        return None
    y = isqrt(rest // d)
    if y * y * d != rest:
        return None
    return b, y


def _reduce_diagonal(a: int, b: int, p: int) -> tuple[int, int] | None:
    # a x^2 + b y^2 takes only multiples of p on {(X, Y): X = tY mod p}; a solution is its minimum
    t = sqrt_mod_prime(-b * mod_inv(a, p), p)
    if t is None:
        return None

    def norm(v):
        return a * v[0] * v[0] + b * v[1] * v[1]

    def dot(u, v):
        return a * u[0] * v[0] + b * u[1] * v[1]

    u, v = (p, 0), (t, 1)
    if norm(u) < norm(v):
        u, v = v, u
    while True:
        # v is the shorter vector; subtract the nearest multiple of it from u
        q = (2 * dot(u, v) + norm(v)) // (2 * norm(v))
        u = (u[0] - q * v[0], u[1] - q * v[1])
        if norm(u) >= norm(v):
            break
        u, v = v, u
    if norm(v) == p:
        return abs(v[0]), abs(v[1])
    return None


def represent_brute(p: int, form: QuadForm) -> QuadRep | None:
    """Exhaustive search: the representation with the smallest x >= 0."""
    n = form.scale * p
    for x in range(isqrt(n // form.a) + 1):
        rest = n - form.a * x * x
        if rest % form.b:
            continue
        y = isqrt(rest // form.b)
        if form.b * y * y == rest:
            return QuadRep(x, y, form)
    return None


def represent(p: int, form: QuadForm) -> QuadRep | None:
    """Some representation ``scale*p = a*x^2 + b*y^2`` with x, y >= 0, or None.

    Nonnegative representations of a prime by these forms are unique
    except for the swap (x, y) -> (y, x) when a == b; that case is
    returned with x <= y, so the result coincides with
    :func:`represent_brute`.
    """
    if form.scale != 1 or p <= 2 or (form.a * form.b) % p == 0:
        return represent_brute(p, form)
    if form.a == 1:
        sol = cornacchia(form.b, p)
    else:
        sol = _reduce_diagonal(form.a, form.b, p)
    if sol is None:
        return None
    x, y = sol
    if form.a == form.b and x > y:
        x, y = y, x
    if form(x, y) != p:
        raise ArithmeticError(f"representation {x},{y} of {p} by {form} failed verification")
    return QuadRep(x, y, form)


def normalize_sign(rep: QuadRep, residue: int, modulus: int) -> QuadRep:
    """Choose the sign of x with x = residue (mod modulus)."""
    for x in (rep.x, -rep.x):
        if (x - residue) % modulus == 0:
            return replace(rep, x=x)
    raise ValueError(f"neither sign of x={rep.x} is {residue} mod {modulus}")


def odd_even(rep: QuadRep) -> QuadRep:
    """For x^2 + y^2, reorder so x is the odd coordinate."""
    if rep.form.a != rep.form.b:
        raise ValueError("only symmetric forms can be reordered")
    if rep.x % 2:
        return rep
    return replace(rep, x=rep.y, y=rep.x)
