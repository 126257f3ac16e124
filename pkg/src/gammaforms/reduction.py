"""Reduction of positive-definite forms to canonical class representatives.

Levels 1, 2, 3 and primes p >= 5 have an explicit reduced-form predicate
(the CM point lies in a chosen fundamental region); for those levels
``enumerate_reduced`` lists the finitely many reduced forms of a
discriminant by a complete coefficient sweep.  Arbitrary levels get a
deterministic canonical representative through coset translates, which is
what the class-group machinery uses for composite N > 3.

The sweep bounds come from the membership conditions themselves:

* level 1:       |b| <= a <= c          gives a <= sqrt(-D/3),
* levels 2, 3:   |b| <= a, |b| <= p*c   gives a*c <= -D/(4-p),
* level p >= 5:  either Im(tau) >= sqrt(3)/(2p) (corner height), so
                 a <= p*sqrt(-D/3), or |b| <= a/p and |b| <= p*c, so
                 a*c <= -D/3.  Hence a <= max(p*sqrt(-D/3), -D/3).

Every enumeration is cross-checked against an independent covering of the
Gamma0(N)-classes by coset translates of the SL2(Z)-reduced forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from . import fundomain
from .core import (
    Form,
    GroupElement,
    IDENTITY,
    S,
    act,
    is_prime,
    prime_factors,
    require_qf,
    translation,
    validate_discriminant,
    xgcd,
)
from .errors import DiscriminantMismatch, UnsupportedLevelError, ValidationError

SUPPORTED_SMALL = (1, 2, 3)


def level_supported(n: int) -> bool:
    """True when a reduced-form predicate exists for Gamma0(n)."""
    return n in SUPPORTED_SMALL or (n >= 5 and is_prime(n))


# ---------------------------------------------------------------------------
# classical SL2(Z) reduction


@dataclass(frozen=True)
class ReductionResult:
    reduced: Form
    transform: GroupElement


def is_reduced_sl2(q: Form) -> bool:
    a, b, c = q.a, q.b, q.c
    if not (abs(b) <= a <= c):
        return False
    if (abs(b) == a or a == c) and b < 0:
        return False
    return True


def reduce_sl2(q: Form) -> ReductionResult:
    """Gauss reduction; returns the reduced form and a witness matrix g
    with act(q, g) equal to it."""
    require_qf(q)
    a, b, c = q.a, q.b, q.c
    g = IDENTITY
    while True:
        if not (-a < b <= a):
            # translate b into (-a, a]
            s = (a - b) // (2 * a)
            g = g * translation(s)
            b, c = b + 2 * a * s, a * s * s + b * s + c
        if a > c:
            g = g * S
            a, b, c = c, -b, a
            continue
        if b == -a:
            g = g * translation(1)
            b = a
        elif a == c and b < 0:
            g = g * S
            b = -b
        break
    reduced = Form(a, b, c)
    assert act(q, g) == reduced
    return ReductionResult(reduced, g)


# ---------------------------------------------------------------------------
# reduced-form predicates for the supported levels


def is_reduced_gamma0_small(q: Form, p: int) -> bool:
    """Reduced predicate for Gamma0(2) and Gamma0(3):
    |b| <= a, |b| <= p*c, and on the boundary b > 0."""
    if p not in (2, 3):
        raise ValidationError(f"level must be 2 or 3: {p}")
    a, b, c = q.a, q.b, q.c
    if abs(b) > a or abs(b) > p * c:
        return False
    if (abs(b) == a or abs(b) == p * c) and b <= 0:
        return False
    return True


def is_reduced_gamma0_p(q: Form, p: int) -> bool:
    """Reduced predicate for Gamma0(p), p >= 5 prime, in form coordinates.

    Exact integer transcription of the region membership conditions; the
    companion predicate on CM points is fundomain.contains.
    """
    if p < 5 or not is_prime(p):
        raise ValidationError(f"level must be a prime >= 5: {p}")
    data = fundomain.elliptic_data(p)
    a, b, c = q.a, q.b, q.c

    # (1) and (3): |b| <= a, and b = a on the boundary
    if abs(b) > a:
        return False
    if abs(b) == a and b != a:
        return False
    # (4) the arc at 1/p is discarded
    if b == -p * c:
        return False
    for k in fundomain.sym_residues(p):
        val = b * p * k + (k * k - 1) * a + p * p * c
        # (2) outside or on every circle
        if val < 0:
            return False
        if val == 0:
            if k in data.e2:
                # (5)
                if b * p < -2 * k * a:
                    return False
            elif k not in (1, -1):
                # (6)
                if b * p < -(2 * data.k2(k) + 1) * a:
                    return False
    # (7) corner points: only the orbit minimum survives
    if p * p * (4 * a * c - b * b) == 3 * a * a:
        for k in fundomain.sym_residues(p):
            if k == 1 or k in data.e3 or k == data.k3(k):
                continue
            if b * p == (1 - 2 * k) * a:
                return False
    return True


def is_reduced(q: Form, n: int) -> bool:
    if n == 1:
        return is_reduced_sl2(q)
    if n in (2, 3):
        return is_reduced_gamma0_small(q, n)
    if level_supported(n):
        return is_reduced_gamma0_p(q, n)
    raise UnsupportedLevelError(f"no reduced-form predicate for level {n}")


# ---------------------------------------------------------------------------
# coset representatives of Gamma0(N) in SL2(Z)


@dataclass(frozen=True)
class CosetSystem:
    """Right-coset representatives Gamma0(N)\\SL2(Z), indexed by the
    projective line over Z/N via the bottom row (c : d)."""

    n: int
    reps: tuple[GroupElement, ...]

    def label_of(self, g: GroupElement) -> tuple[int, int]:
        return p1_label(self.n, g.c, g.d)

    def index_of(self, g: GroupElement) -> int:
        label = self.label_of(g)
        for i, rep in enumerate(self.reps):
            if self.label_of(rep) == label:
                return i
        raise ValidationError(f"matrix {g} matches no coset at level {self.n}")


def p1_label(n: int, c: int, d: int) -> tuple[int, int]:
    """Canonical label of (c : d) on P^1(Z/N): the lexicographically least
    unit multiple.  Requires gcd(c, d, n) = 1."""
    c %= n
    d %= n
    if math.gcd(math.gcd(c, d), n) != 1:
        raise ValidationError(f"({c} : {d}) is not a point of P^1(Z/{n})")
    best = None
    for u in range(1, n + 1):
        if math.gcd(u, n) != 1:
            continue
        cand = (u * c % n, u * d % n)
        if best is None or cand < best:
            best = cand
    return best if best is not None else (0, 0)


def _lift_to_sl2(n: int, c: int, d: int) -> GroupElement:
    """An SL2(Z) matrix whose bottom row is = (c, d) mod n."""
    c %= n
    d %= n
    for t in range(4 * n + 4):
        d0 = d + t * n
        if math.gcd(c, d0) == 1:
            g, u, v = xgcd(d0, c)
            # u*d0 + v*c = 1  ->  det (u, -v; c, d0) = 1
            return GroupElement(u, -v, c, d0)
    raise ValidationError(f"cannot lift ({c} : {d}) mod {n} to SL2(Z)")


@lru_cache(maxsize=None)
def coset_reps(n: int) -> CosetSystem:
    """A complete duplicate-free right-coset system for Gamma0(n)."""
    if n < 1:
        raise ValidationError(f"level must be >= 1: {n}")
    if n == 1:
        return CosetSystem(1, (IDENTITY,))
    labels = sorted(
        {
            p1_label(n, c, d)
            for c in range(n)
            for d in range(n)
            if math.gcd(math.gcd(c, d), n) == 1
        }
    )
    reps = tuple(_lift_to_sl2(n, c, d) for c, d in labels)
    expected = n
    for p in prime_factors(n):
        expected = expected // p * (p + 1)
    if len(reps) != expected:
        raise ValidationError(f"coset count {len(reps)} != index {expected} at level {n}")
    return CosetSystem(n, reps)


# ---------------------------------------------------------------------------
# proper automorphisms and equivalence testing


def automorphs(q: Form) -> tuple[GroupElement, ...]:
    """The stabilizer of q under the right action (proper automorphisms).

    Solutions (t, u) of t^2 - D*u^2 = 4 give the matrices
    ((t - b*u)/2, -c*u; a*u, (t + b*u)/2); there are 6 for D = -3,
    4 for D = -4 and 2 otherwise.
    """
    require_qf(q)
    d = q.disc
    out = []
    umax = math.isqrt(4 // (-d)) if -d <= 4 else 0
    for u in range(-umax, umax + 1):
        rhs = 4 + d * u * u
        if rhs < 0:
            continue
        t = math.isqrt(rhs)
        if t * t != rhs:
            continue
        for tt in ({t, -t} if t else {0}):
            out.append(
                GroupElement(
                    (tt - q.b * u) // 2, -q.c * u, q.a * u, (tt + q.b * u) // 2
                )
            )
    return tuple(sorted(set(out), key=lambda g: g.as_tuple()))


def equivalent_gamma0(q1: Form, q2: Form, n: int) -> GroupElement | None:
    """A matrix g in Gamma0(n) with act(q1, g) = q2, or None.

    Both forms are reduced to the common SL2(Z) representative; the full
    solution set of act(q1, g) = q2 is then delta1 * Aut * delta2^(-1),
    and it suffices to test each candidate's lower-left entry mod n.
    """
    require_qf(q1)
    require_qf(q2)
    if q1.disc != q2.disc:
        raise DiscriminantMismatch(f"disc {q1.disc} != {q2.disc}")
    r1 = reduce_sl2(q1)
    r2 = reduce_sl2(q2)
    if r1.reduced != r2.reduced:
        return None
    d2_inv = r2.transform.inverse()
    for u in automorphs(r1.reduced):
        g = r1.transform * u * d2_inv
        if g.in_gamma0(n):
            assert act(q1, g) == q2
            return g
    return None


# ---------------------------------------------------------------------------
# enumeration of reduced forms


def _sweep_forms(d: int, a_max: int, b_bound_of_a=lambda a: a):
    """All primitive forms (a, b, c) of discriminant d with
    1 <= a <= a_max and |b| <= b_bound_of_a(a)."""
    for a in range(1, a_max + 1):
        bb = b_bound_of_a(a)
        start = -bb if (-bb - d) % 2 == 0 else -bb + 1
        for b in range(start, bb + 1, 2):
            num = b * b - d
            if num % (4 * a) != 0:
                continue
            c = num // (4 * a)
            if c < 1:
                continue
            f = Form(a, b, c)
            if f.is_primitive():
                yield f


def _sweep_sl2(d: int) -> list[Form]:
    a_max = math.isqrt(-d // 3)
    return [f for f in _sweep_forms(d, max(a_max, 1)) if is_reduced_sl2(f)]


def _sweep_small(d: int, p: int) -> list[Form]:
    a_max = max((-d) // (4 - p), 1)
    return [f for f in _sweep_forms(d, a_max) if is_reduced_gamma0_small(f, p)]


def _sweep_prime(d: int, p: int) -> list[Form]:
    a_max = max(math.isqrt(p * p * (-d) // 3), (-d) // 3, 1)
    return [f for f in _sweep_forms(d, a_max) if is_reduced_gamma0_p(f, p)]


def gamma0_class_representatives(
    d: int, n: int, system: CosetSystem | None = None
) -> tuple[Form, ...]:
    """One representative per Gamma0(n)-class of discriminant d.

    Every form is Gamma0(n)-equivalent to act(R, g^(-1)) for its SL2(Z)
    reduction R and some right-coset representative g, so deduplicating
    those translates covers every class exactly once.
    """
    validate_discriminant(d)
    system = system or coset_reps(n)
    reps: list[Form] = []
    for r in _sweep_sl2(d):
        classes: list[Form] = []
        for g in system.reps:
            t = act(r, g.inverse())
            if all(equivalent_gamma0(t, known, n) is None for known in classes):
                classes.append(t)
        reps.extend(classes)
    return tuple(reps)


@lru_cache(maxsize=None)
def enumerate_reduced(d: int, n: int) -> tuple[Form, ...]:
    """All Gamma0(n)-reduced forms of discriminant d, sorted by (a, b, c).

    Supported levels only.  The sweep result is verified against the
    independent class covering: one reduced form per class, no extras.
    """
    validate_discriminant(d)
    if n == 1:
        forms = _sweep_sl2(d)
    elif n in (2, 3):
        forms = _sweep_small(d, n)
    elif level_supported(n):
        forms = _sweep_prime(d, n)
    else:
        raise UnsupportedLevelError(f"no fundamental domain for level {n}")
    forms.sort(key=lambda f: (f.a, f.b, f.c))

    classes = gamma0_class_representatives(d, n)
    if len(forms) != len(classes):
        raise RuntimeError(
            f"reduced-form count {len(forms)} != class count {len(classes)} "
            f"for disc {d}, level {n}"
        )
    for rep in classes:
        hits = [f for f in forms if equivalent_gamma0(rep, f, n) is not None]
        if len(hits) != 1:
            raise RuntimeError(
                f"class of {rep} matches {len(hits)} reduced forms at disc {d}, level {n}"
            )
    return tuple(forms)


def canonical_rep(q: Form, n: int) -> Form:
    """A canonical Gamma0(n)-class representative of q.

    For supported levels this is the unique reduced form of the class; for
    general n it is the lexicographically least coset translate of the
    SL2(Z) reduction that stays in the class.  Same output for every input
    in the class.
    """
    require_qf(q)
    if level_supported(n):
        for f in enumerate_reduced(q.disc, n):
            if equivalent_gamma0(q, f, n) is not None:
                return f
        raise RuntimeError(f"no reduced form equivalent to {q} at level {n}")
    r = reduce_sl2(q).reduced
    candidates = []
    for g in coset_reps(n).reps:
        t = act(r, g.inverse())
        if equivalent_gamma0(q, t, n) is not None:
            candidates.append(t)
    if not candidates:
        raise RuntimeError(f"coset translates missed the class of {q} at level {n}")
    return min(candidates, key=lambda f: (f.a, f.b, f.c))
