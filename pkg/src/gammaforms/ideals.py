"""Independent composition oracle: ideals of the quadratic order of
discriminant D as rank-2 integer lattices in Hermite normal form.

The order is O = Z + Z*delta with delta = (D + sqrt(D))/2, so that
delta^2 = D*delta - (D^2 - D)/4.  An element x + y*delta is the vector
(x, y); a lattice is a 2x2 upper-triangular integer matrix

    ((h00, h01), (0, h11)),   h00, h11 > 0,   0 <= h01 < h11,

holding the basis rows, together with a positive rational scale for
fractional ideals.  The matrix is kept primitive (content 1, pushed into
the scale), which makes lattice equality a structural equality.
Multiplication expands the four pairwise products of basis vectors with
the minimal polynomial of delta and re-normalizes; no composition formula
is involved anywhere, which is what makes this an independent check of the
form-level group law.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import Form, require_qf, validate_discriminant, xgcd
from .errors import ValidationError

Matrix = tuple[tuple[int, int], tuple[int, int]]


@dataclass(frozen=True)
class QuadOrder:
    """The order of discriminant D, basis (1, delta), delta = (D + sqrt(D))/2."""

    D: int

    def __post_init__(self) -> None:
        validate_discriminant(self.D)

    @property
    def delta_norm(self) -> int:
        return (self.D * self.D - self.D) // 4

    def mul(self, u: tuple[int, int], v: tuple[int, int]) -> tuple[int, int]:
        """(x1 + y1*delta)(x2 + y2*delta) in coordinates."""
        x1, y1 = u
        x2, y2 = v
        return (
            x1 * x2 - y1 * y2 * self.delta_norm,
            x1 * y2 + y1 * x2 + y1 * y2 * self.D,
        )

    def conj(self, u: tuple[int, int]) -> tuple[int, int]:
        """Complex conjugation: delta -> D - delta."""
        x, y = u
        return (x + y * self.D, -y)


def hnf_rows(rows: list[tuple[int, int]]) -> Matrix:
    """Hermite normal form of the lattice spanned by the given rows.

    Requires full rank.  The first row generates the projection onto the
    1-coordinate, the second spans the pure-delta sublattice.
    """
    pivot: tuple[int, int] | None = None
    ys: list[int] = []
    for x, y in rows:
        if x == 0:
            if y:
                ys.append(y)
            continue
        if pivot is None:
            pivot = (x, y)
            continue
        px, py = pivot
        g, s, t = xgcd(px, x)
        # rows (pivot, (x, y)) -> (s*pivot + t*(x,y), complement); det +1
        ys.append((px // g) * y - (x // g) * py)
        pivot = (g, s * py + t * y)
    if pivot is None or not any(ys):
        raise ValidationError("lattice is not of full rank")
    h00, h01 = pivot
    if h00 < 0:
        h00, h01 = -h00, -h01
    h11 = 0
    for y in ys:
        h11 = math.gcd(h11, abs(y))
    h01 %= h11
    return ((h00, h01), (0, h11))


@dataclass(frozen=True)
class OIdeal:
    """A fractional ideal (or plain lattice) scale * (Z row0 + Z row1)."""

    order: QuadOrder
    mat: Matrix
    scale: Fraction

    @classmethod
    def make(cls, order: QuadOrder, rows: list[tuple[int, int]], scale: Fraction = Fraction(1)) -> "OIdeal":
        if scale <= 0:
            raise ValidationError("scale must be positive")
        mat = hnf_rows(rows)
        content = math.gcd(math.gcd(mat[0][0], mat[0][1]), mat[1][1])
        if content > 1:
            mat = (
                (mat[0][0] // content, mat[0][1] // content),
                (0, mat[1][1] // content),
            )
        return cls(order, mat, scale * content)

    @property
    def det(self) -> int:
        return self.mat[0][0] * self.mat[1][1]

    def norm(self) -> Fraction:
        """Module index in O, scaled: det(H) * scale^2."""
        return self.scale * self.scale * self.det

    def basis(self) -> list[tuple[int, int]]:
        return [self.mat[0], self.mat[1]]

    def contains_vec(self, v: tuple[int, int]) -> bool:
        """Membership of an integer vector in the unscaled lattice."""
        (h00, h01), (_, h11) = self.mat
        x, y = v
        if x % h00 != 0:
            return False
        return (y - (x // h00) * h01) % h11 == 0

    def is_delta_stable(self) -> bool:
        """Closure under multiplication by delta (the O-ideal test)."""
        delta = (0, 1)
        return all(
            self.contains_vec(self.order.mul(delta, row)) for row in self.basis()
        )

    def conjugate(self) -> "OIdeal":
        rows = [self.order.conj(row) for row in self.basis()]
        return OIdeal.make(self.order, rows, self.scale)

    def scaled(self, factor: Fraction | int) -> "OIdeal":
        factor = Fraction(factor)
        if factor <= 0:
            raise ValidationError("scale factor must be positive")
        return OIdeal(self.order, self.mat, self.scale * factor)

    def __str__(self) -> str:
        return f"{self.scale} * <{self.mat[0]}, {self.mat[1]}> over disc {self.order.D}"


def whole_order_ideal(d: int) -> OIdeal:
    return OIdeal(QuadOrder(d), ((1, 0), (0, 1)), Fraction(1))


def ideal_from_form(q: Form) -> OIdeal:
    """The integral ideal Z*a + Z*(-b + sqrt(D))/2 of norm a.

    In the (1, delta) basis the second generator is delta - (b + D)/2.
    """
    require_qf(q)
    d = q.disc
    rows = [(q.a, 0), (-(q.b + d) // 2, 1)]
    ideal = OIdeal.make(QuadOrder(d), rows)
    assert ideal.norm() == q.a
    return ideal


def ideal_mul(i: OIdeal, j: OIdeal) -> OIdeal:
    """Product lattice: HNF of the four pairwise products of basis vectors."""
    if i.order != j.order:
        raise ValidationError("ideals live in different orders")
    rows = [i.order.mul(u, v) for u in i.basis() for v in j.basis()]
    return OIdeal.make(i.order, rows, i.scale * j.scale)


def ideal_norm(i: OIdeal) -> Fraction:
    return i.norm()
