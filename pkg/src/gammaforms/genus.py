"""N-representation of integers and genus classification of primes.

An integer m is N-represented by a form when m = q(x, y) with x coprime
to N and y divisible by N, properly when additionally gcd(x, y) = 1.  The
unit residues modulo |D| that a fixed admissible form N-represents make up
one coset of the subgroup H (the values of the principal form) inside
ker(chi), chi being the Kronecker character of D.  Those cosets cut the
admissible reduced forms into N-genera, and an odd prime p with p not
dividing D satisfies (D/p) = 1 exactly when some reduced form of
discriminant D N-represents it; the coset of [p] then names the genus of
every admissible witness.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

from .classgroup import principal_form
from .core import (
    Form,
    GroupElement,
    act,
    is_prime,
    is_square,
    ker_chi,
    kronecker,
    representation_values,
    require_qf,
    search_bound,
    units_mod,
    validate_discriminant,
    xgcd,
)
from .errors import SearchBoundExceeded, ValidationError
from .ideals import OIdeal, ideal_from_form
from .reduction import enumerate_reduced, level_supported
from . import classgroup


@dataclass(frozen=True)
class Representation:
    """One solution q(x, y) = value, flagged relative to the level used."""

    x: int
    y: int
    value: int
    level: int
    proper: bool
    admissible: bool


def _rep_sort_key(r: Representation) -> tuple:
    return (abs(r.y), abs(r.x), r.y < 0, r.x < 0)


def find_representations(q: Form, m: int, n: int) -> tuple[Representation, ...]:
    """All integer solutions of q(x, y) = m, each flagged.

    Positive definiteness bounds the search: 4*a*m = (2ax + by)^2 - D*y^2
    forces |y| <= sqrt(4am/|D|), and x solves a quadratic per y.
    """
    if not q.is_positive_definite():
        raise ValidationError(f"form must be positive definite: {q}")
    if n < 1:
        raise ValidationError(f"level must be >= 1: {n}")
    if m < 0:
        return ()
    d = q.disc
    out = []
    ymax = math.isqrt(4 * q.a * m // (-d))
    for y in range(-ymax, ymax + 1):
        # a x^2 + (b y) x + (c y^2 - m) = 0
        disc_x = 4 * q.a * m + d * y * y
        if disc_x < 0 or not is_square(disc_x):
            continue
        s = math.isqrt(disc_x)
        for sign in ({s, -s} if s else {0}):
            num = -q.b * y + sign
            if num % (2 * q.a) != 0:
                continue
            x = num // (2 * q.a)
            out.append(
                Representation(
                    x,
                    y,
                    m,
                    n,
                    math.gcd(x, y) == 1,
                    math.gcd(x, n) == 1 and y % n == 0,
                )
            )
    return tuple(sorted(set(out), key=_rep_sort_key))


def form_from_representation(q: Form, r: Representation, n: int) -> Form:
    """A form with leading coefficient r.value, Gamma0(n)-equivalent to q.

    Completes the proper N-admissible pair (x, y) to the first column of a
    matrix in Gamma0(n) and transports q.
    """
    require_qf(q)
    if not (r.proper and r.admissible):
        raise ValidationError(f"representation {r} is not proper and admissible")
    if q(r.x, r.y) != r.value:
        raise ValidationError(f"{r} does not represent {r.value} under {q}")
    _, u, v = xgcd(r.x, r.y)
    gamma = GroupElement(r.x, -v, r.y, u)
    if not gamma.in_gamma0(n):
        raise ValidationError(f"completion of {r} left Gamma0({n})")
    out = act(q, gamma)
    assert out.a == r.value
    return out


def exists_representing_form(d: int, m: int, n: int) -> Form | None:
    """A primitive form m*x^2 + b*xy + c*y^2 of discriminant d, when d is a
    quadratic residue modulo the odd integer m; None otherwise."""
    validate_discriminant(d)
    if m <= 0 or m % 2 == 0:
        raise ValidationError(f"m must be an odd positive integer: {m}")
    if math.gcd(m, d) != 1:
        raise ValidationError(f"m = {m} is not coprime to D = {d}")
    for b in range(2 * m):
        if (b * b - d) % (4 * m) == 0:
            return Form(m, b, (b * b - d) // (4 * m))
    return None


# ---------------------------------------------------------------------------
# genus tables


@dataclass(frozen=True)
class GenusTable:
    D: int
    N: int
    ker_chi: frozenset[int]
    h_subgroup: frozenset[int]
    cosets: tuple[frozenset[int], ...]
    assignment: tuple[tuple[Form, int], ...]

    def coset_of_residue(self, m: int) -> int:
        r = m % abs(self.D)
        for i, coset in enumerate(self.cosets):
            if r in coset:
                return i
        raise ValidationError(f"{m} mod {abs(self.D)} lies in no coset of H")

    def coset_of_form(self, q: Form) -> int:
        for f, i in self.assignment:
            if f == q:
                return i
        raise ValidationError(f"{q} carries no genus assignment")

    def genus_forms(self, i: int) -> tuple[Form, ...]:
        return tuple(f for f, j in self.assignment if j == i)


def _admissible_reps(d: int, n: int) -> list[Form]:
    if level_supported(n):
        return [f for f in enumerate_reduced(d, n) if math.gcd(f.a, n) == 1]
    return [cl.rep for cl in classgroup.class_group(d, n).elements]


@lru_cache(maxsize=None)
def genus_table(d: int, n: int) -> GenusTable:
    """ker(chi), H, its cosets, and the genus of every admissible form.

    H consists of the unit residues N-represented by the principal form;
    each admissible reduced form N-represents exactly one H-coset, which is
    checked, not assumed.
    """
    validate_discriminant(d)
    if n < 1:
        raise ValidationError(f"level must be >= 1: {n}")
    modulus = abs(d)
    units = units_mod(d)
    ker = ker_chi(d)
    h = representation_values(principal_form(d), n, modulus) & units
    if not h <= ker:
        raise RuntimeError(f"H is not inside ker(chi) for disc {d}, level {n}")
    cosets: list[frozenset[int]] = []
    remaining = set(ker)
    while remaining:
        m = min(remaining)
        coset = frozenset(m * x % modulus for x in h)
        if not coset <= remaining:
            raise RuntimeError(f"H-cosets do not partition ker(chi) for disc {d}")
        cosets.append(coset)
        remaining -= coset
    assignment = []
    for f in _admissible_reps(d, n):
        values = representation_values(f, n, modulus) & units
        matches = [i for i, coset in enumerate(cosets) if values == coset]
        if len(matches) != 1:
            raise RuntimeError(
                f"values of {f} are not exactly one H-coset (disc {d}, level {n})"
            )
        assignment.append((f, matches[0]))
    return GenusTable(d, n, ker, h, tuple(cosets), tuple(assignment))


@dataclass(frozen=True)
class PrimeClassification:
    prime: int
    D: int
    N: int
    kronecker: int
    coset: tuple[int, ...] | None
    witness: Form | None
    representation: Representation | None

    @property
    def represented(self) -> bool:
        return self.coset is not None


def classify_prime(p: int, d: int, n: int) -> PrimeClassification:
    """Locate the coset of an odd prime p and exhibit a representing form.

    For (D/p) = 1 the witness search runs over the forms of the matching
    genus first, then over every reduced form (a witness with leading
    coefficient sharing a factor with N can occur only when p divides N).
    """
    validate_discriminant(d)
    if p == 2 or not is_prime(p):
        raise ValidationError(f"p must be an odd prime: {p}")
    if d % p == 0:
        raise ValidationError(f"p = {p} divides D = {d}")
    chi = kronecker(d, p)
    if chi != 1:
        return PrimeClassification(p, d, n, chi, None, None, None)
    table = genus_table(d, n)
    idx = table.coset_of_residue(p)
    pools = [table.genus_forms(idx), _all_reduced(d, n)]
    for pool in pools:
        for f in pool:
            good = [r for r in find_representations(f, p, n) if r.admissible]
            if good:
                return PrimeClassification(
                    p, d, n, chi, tuple(sorted(table.cosets[idx])), f, good[0]
                )
    raise RuntimeError(f"no reduced form of disc {d} N-represents {p} at level {n}")


def _all_reduced(d: int, n: int) -> tuple[Form, ...]:
    if level_supported(n):
        return enumerate_reduced(d, n)
    return tuple(cl.rep for cl in classgroup.class_group(d, n).elements)


def principal_genus_congruences(d: int, n: int) -> frozenset[int]:
    """The residue classes of the principal genus, straight from squares.

    For D = -4m: x^2 (mod 4m) over x coprime to N, together with x^2 + m
    when N is odd.  For D = 1 - 4m: x^2 (mod 4m - 1) over x coprime to N.
    Unit residues only; equals genus_table(D, N).h_subgroup.
    """
    validate_discriminant(d)
    if n < 1:
        raise ValidationError(f"level must be >= 1: {n}")
    modulus = abs(d)
    l = modulus // math.gcd(modulus, n) * n
    vals = set()
    if d % 4 == 0:
        m = -d // 4
        for x in range(l):
            if math.gcd(x, n) != 1:
                continue
            vals.add(x * x % modulus)
            if n % 2 == 1:
                vals.add((x * x + m) % modulus)
    else:
        for x in range(l):
            if math.gcd(x, n) != 1:
                continue
            vals.add(x * x % modulus)
    return frozenset(vals) & units_mod(d)


def coprime_value(q: Form, n_target: int, n: int) -> tuple[int, Representation]:
    """Smallest properly N-represented value coprime to n_target * N."""
    require_qf(q)
    if math.gcd(q.a, n) != 1:
        raise ValidationError(f"gcd(a, N) must be 1: {q}, N = {n}")
    limit = search_bound(4 * max(abs(n_target), 1) * n * abs(q.disc))
    for m in range(1, limit + 1):
        if math.gcd(m, n_target * n) != 1:
            continue
        good = [r for r in find_representations(q, m, n) if r.proper and r.admissible]
        if good:
            return m, good[0]
    raise SearchBoundExceeded(f"coprime_value({q}, {n_target}, {n}) exceeded m <= {limit}")


# ---------------------------------------------------------------------------
# composition identity for even-middle forms


def _poly_mul(p1: dict, p2: dict) -> dict:
    out: dict = {}
    for e1, c1 in p1.items():
        for e2, c2 in p2.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _poly_add(p1: dict, p2: dict, sign: int = 1) -> dict:
    out = dict(p1)
    for e, c in p2.items():
        out[e] = out.get(e, 0) + sign * c
    return {e: c for e, c in out.items() if c}


def brahmagupta_check(q: Form, n: int = 1, samples: int = 20, seed: int = 0) -> bool:
    """Verify the product identity for a form (a, 2b, c) of discriminant -4m:

        (a x^2 + 2b xy + c y^2)(a z^2 + 2b zw + c w^2)
            = (a xz + b xw + b yz + c yw)^2 + m (xw - yz)^2,  m = ac - b^2,

    once symbolically (exact polynomial expansion in x, y, z, w) and on
    random integer samples, where N-admissibility of the output pair is
    also checked: the first square's argument stays coprime to N and
    xw - yz = 0 (mod N) whenever (a, N) = 1, (xz, N) = 1, y = w = 0 (mod N).
    """
    if q.b % 2 != 0:
        raise ValidationError(f"middle coefficient must be even: {q}")
    a, bh, c = q.a, q.b // 2, q.c
    m = a * c - bh * bh
    if q.disc != -4 * m:
        raise ValidationError("inconsistent discriminant")

    # exponent order (x, y, z, w)
    left = _poly_mul(
        {(2, 0, 0, 0): a, (1, 1, 0, 0): 2 * bh, (0, 2, 0, 0): c},
        {(0, 0, 2, 0): a, (0, 0, 1, 1): 2 * bh, (0, 0, 0, 2): c},
    )
    lin = {
        (1, 0, 1, 0): a,
        (1, 0, 0, 1): bh,
        (0, 1, 1, 0): bh,
        (0, 1, 0, 1): c,
    }
    cross = {(1, 0, 0, 1): 1, (0, 1, 1, 0): -1}
    right = _poly_add(_poly_mul(lin, lin), {e: m * v for e, v in _poly_mul(cross, cross).items()})
    if _poly_add(left, right, sign=-1):
        return False

    rng = random.Random(seed)
    for _ in range(samples):
        x, z = (rng.randrange(1, 50) * n + 1 for _ in range(2))
        y, w = (rng.randrange(-20, 21) * n for _ in range(2))
        lhs = q(x, y) * q(z, w)
        first = a * x * z + bh * x * w + bh * y * z + c * y * w
        rhs = first * first + m * (x * w - y * z) ** 2
        if lhs != rhs:
            return False
        if math.gcd(a, n) == 1 and math.gcd(x * z, n) == 1:
            if math.gcd(first, n) != 1 or (x * w - y * z) % n != 0:
                return False
    return True


def ideal_of_norm_from_representation(q: Form, r: Representation) -> OIdeal:
    """An ideal of norm r.value built from an N-admissible representation.

    With d = gcd(x, y), the proper part (x/d, y/d) represents value/d^2 and
    transports q to a form with that leading coefficient; scaling its ideal
    by d gives norm d^2 * (value/d^2) = value.
    """
    require_qf(q)
    if not r.admissible:
        raise ValidationError(f"representation {r} is not N-admissible")
    if q(r.x, r.y) != r.value or r.value <= 0:
        raise ValidationError(f"{r} is not a positive value of {q}")
    d = math.gcd(r.x, r.y)
    proper = Representation(r.x // d, r.y // d, r.value // (d * d), r.level, True, True)
    f2 = form_from_representation(q, proper, r.level)
    ideal = ideal_from_form(f2).scaled(d)
    assert ideal.norm() == r.value
    return ideal
