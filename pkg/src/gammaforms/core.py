"""Core objects: integral binary quadratic forms, unimodular matrices,
CM points, and the elementary number theory they need.

Every quantity is exact.  Form coefficients and matrix entries are Python
integers; geometric data attached to a CM point tau = (numB + sqrt(D))/den
is handled through the rationals Re(tau) and Im(tau)^2, so that all
comparisons against lines, circles and corner points reduce to integer
arithmetic.  Nothing in this module ever touches a float.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import ValidationError

# ---------------------------------------------------------------------------
# small number theory helpers


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with g = gcd(a, b) >= 0 and s*a + t*b = g."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def crt(r1: int, m1: int, r2: int, m2: int) -> tuple[int, int] | None:
    """Solve x = r1 (mod m1), x = r2 (mod m2).

    Returns (x, lcm(m1, m2)) with 0 <= x < lcm, or None when incompatible.
    """
    g, s, _ = xgcd(m1, m2)
    if (r2 - r1) % g != 0:
        return None
    l = m1 // g * m2
    x = (r1 + (r2 - r1) // g * s % (m2 // g) * m1) % l
    return x, l


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime divisors of |n|."""
    n = abs(n)
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def is_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def search_bound(default: int) -> int:
    """Safety limit for bounded searches; GAMMA_FORMS_MAX_SEARCH overrides."""
    env = os.environ.get("GAMMA_FORMS_MAX_SEARCH")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ValidationError(f"GAMMA_FORMS_MAX_SEARCH is not an integer: {env!r}") from exc
    return default


def kronecker(d: int, m: int) -> int:
    """Kronecker symbol (d/m), defined for all integers.

    Completely multiplicative in m; for d = 0, 1 (mod 4) it induces the
    quadratic character on the units modulo |d|.
    """
    if m == 0:
        return 1 if d in (1, -1) else 0
    if d % 2 == 0 and m % 2 == 0:
        return 0
    t = 1
    if m < 0:
        m = -m
        if d < 0:
            t = -t
    # factors of 2 in the bottom argument
    twos = 0
    while m % 2 == 0:
        twos += 1
        m //= 2
    if twos % 2 == 1 and d % 8 in (3, 5):
        t = -t
    if d < 0:
        d = -d
        if m % 4 == 3:
            t = -t
    d %= m
    while d:
        while d % 2 == 0:
            d //= 2
            if m % 8 in (3, 5):
                t = -t
        d, m = m, d
        if d % 4 == 3 and m % 4 == 3:
            t = -t
        d %= m
    return t if m == 1 else 0


def validate_discriminant(d: int) -> None:
    if d >= 0 or d % 4 not in (0, 1):
        raise ValidationError(f"not a negative discriminant: {d}")


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class GroupElement:
    """An element of SL2(Z), acting on forms on the right and on the upper
    half-plane by fractional linear transformations."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        if self.a * self.d - self.b * self.c != 1:
            raise ValidationError(f"matrix has determinant != 1: {self.as_tuple()}")

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "GroupElement":
        return GroupElement(self.d, -self.b, -self.c, self.a)

    def in_gamma0(self, n: int) -> bool:
        return self.c % n == 0

    def __str__(self) -> str:
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


IDENTITY = GroupElement(1, 0, 0, 1)
T = GroupElement(1, 1, 0, 1)
S = GroupElement(0, -1, 1, 0)


def translation(s: int) -> GroupElement:
    return GroupElement(1, s, 0, 1)


@dataclass(frozen=True)
class GammaLevel:
    """The congruence subgroup Gamma0(N): lower-left entry divisible by N."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValidationError(f"level must be >= 1: {self.n}")

    def contains(self, g: GroupElement) -> bool:
        return g.in_gamma0(self.n)


# ---------------------------------------------------------------------------
# forms


@dataclass(frozen=True)
class Form:
    """The quadratic form a*x^2 + b*xy + c*y^2 as a value type."""

    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def content(self) -> int:
        return math.gcd(math.gcd(abs(self.a), abs(self.b)), abs(self.c))

    def is_primitive(self) -> bool:
        return self.content() == 1

    def is_positive_definite(self) -> bool:
        return self.a > 0 and self.disc < 0

    def is_qf(self) -> bool:
        """Primitive and positive definite."""
        return self.is_positive_definite() and self.is_primitive()

    @classmethod
    def qf(cls, a: int, b: int, c: int) -> "Form":
        """Constructor that enforces primitivity and positive definiteness."""
        f = cls(a, b, c)
        if not f.is_positive_definite():
            raise ValidationError(f"form is not positive definite: {f}")
        if not f.is_primitive():
            raise ValidationError(f"form is not primitive: {f}")
        return f

    @classmethod
    def from_string(cls, s: str) -> "Form":
        try:
            a, b, c = (int(part.strip()) for part in s.split(","))
        except ValueError as exc:
            raise ValidationError(f"cannot parse form {s!r}; expected 'a,b,c'") from exc
        return cls(a, b, c)

    def to_json_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c}

    def __str__(self) -> str:
        return f"{self.a},{self.b},{self.c}"


def require_qf(q: Form) -> None:
    if not q.is_qf():
        raise ValidationError(f"expected a primitive positive-definite form, got {q}")


def act(q: Form, g: GroupElement) -> Form:
    """Right action: (q . g)(x, y) = q(a*x + b*y, c*x + d*y)."""
    a2 = q(g.a, g.c)
    c2 = q(g.b, g.d)
    b2 = 2 * q.a * g.a * g.b + q.b * (g.a * g.d + g.b * g.c) + 2 * q.c * g.c * g.d
    return Form(a2, b2, c2)


# ---------------------------------------------------------------------------
# CM points


@dataclass(frozen=True)
class CmPoint:
    """The quadratic point tau = (numB + sqrt(D))/den in the upper half-plane.

    Built from a form (a, b, c) this is (-b + sqrt(D))/(2a).  The stored
    data always satisfies den > 0, D < 0 and 2*den | numB^2 - D, which is
    exactly what is needed for Moebius images to stay in this shape.
    Equality is numeric: two points agree iff Re and Im^2 agree.
    """

    numB: int
    den: int
    D: int

    def __post_init__(self) -> None:
        if self.den <= 0:
            raise ValidationError("CmPoint denominator must be positive")
        if self.D >= 0:
            raise ValidationError("CmPoint needs a negative discriminant")
        if (self.numB * self.numB - self.D) % (2 * self.den) != 0:
            raise ValidationError(
                f"CmPoint data ({self.numB}, {self.den}, {self.D}) is not form-compatible"
            )

    @property
    def re(self) -> Fraction:
        return Fraction(self.numB, self.den)

    @property
    def im_sq(self) -> Fraction:
        return Fraction(-self.D, self.den * self.den)

    @property
    def abs_sq(self) -> Fraction:
        return Fraction(self.numB * self.numB - self.D, self.den * self.den)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CmPoint):
            return NotImplemented
        return self.re == other.re and self.im_sq == other.im_sq

    def __hash__(self) -> int:
        return hash((self.re, self.im_sq))

    def __str__(self) -> str:
        return f"({self.numB} + sqrt({self.D}))/{self.den}"


def cm_point(q: Form) -> CmPoint:
    """The root of q(x, 1) = 0 in the upper half-plane."""
    if not q.is_positive_definite():
        raise ValidationError(f"form has no CM point (not positive definite): {q}")
    return CmPoint(-q.b, 2 * q.a, q.disc)


def form_from_cm(t: CmPoint) -> Form:
    """The primitive form whose CM point is t (inverse of cm_point up to content)."""
    two_a = t.den
    if two_a % 2 != 0:
        raise ValidationError(f"CM point {t} does not come from an integral form")
    a = two_a // 2
    b = -t.numB
    c = (t.numB * t.numB - t.D) // (2 * t.den)
    g = math.gcd(math.gcd(a, abs(b)), c)
    return Form(a // g, b // g, c // g)


def moebius(g: GroupElement, t: CmPoint) -> CmPoint:
    """Exact image of t under tau -> (a*tau + b)/(c*tau + d)."""
    n, m, d = t.numB, t.den, t.D
    top = g.a * n + g.b * m
    bot = g.c * n + g.d * m
    num = top * bot - g.a * g.c * d
    den = bot * bot - g.c * g.c * d
    if num % m != 0 or den % m != 0:
        raise ValidationError(f"Moebius image of {t} left the integral shape")
    return CmPoint(num // m, den // m, d)


def moebius_rational(g: GroupElement, q: Fraction | None) -> Fraction | None:
    """Action on cusps: q is a rational number or None for infinity."""
    if q is None:
        if g.c == 0:
            return None
        return Fraction(g.a, g.c)
    top = g.a * q.numerator + g.b * q.denominator
    bot = g.c * q.numerator + g.d * q.denominator
    if bot == 0:
        return None
    return Fraction(top, bot)


# ---------------------------------------------------------------------------
# representation values modulo an integer


def representation_values(q: Form, n: int, modulus: int) -> frozenset[int]:
    """Values q(x, y) mod `modulus` over x coprime to n and y = 0 (mod n).

    The value only depends on (x, y) modulo `modulus` and the constraints
    only on (x, y) modulo n, so a full residue system modulo lcm(modulus, n)
    is exact.  These sets are invariant under Gamma0(n)-equivalence.
    """
    if modulus < 1:
        raise ValidationError(f"modulus must be >= 1: {modulus}")
    if n < 1:
        raise ValidationError(f"level must be >= 1: {n}")
    l = modulus // math.gcd(modulus, n) * n
    good_x = [x for x in range(l) if math.gcd(x, n) == 1]
    values = set()
    for y in range(0, l, n):
        for x in good_x:
            values.add(q(x, y) % modulus)
    return frozenset(values)


def units_mod(m: int) -> frozenset[int]:
    return frozenset(x for x in range(abs(m)) if math.gcd(x, m) == 1)


@lru_cache(maxsize=None)
def ker_chi(d: int) -> frozenset[int]:
    """Units m modulo |d| with Kronecker symbol (d/m) = +1."""
    validate_discriminant(d)
    return frozenset(m for m in units_mod(d) if kronecker(d, m) == 1)
