"""Exact rational 3-vectors and 3x3 matrices on the angle plane.

Vectors are plain tuples of :class:`fractions.Fraction`; matrices are the
immutable :class:`Mat3`. Coordinates are normalized angles (pi = 1), so the
plane of all angle triples is ``x + y + z = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Tuple

Vec = Tuple[Fraction, Fraction, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)
THIRD = Fraction(1, 3)

FLAT_TOL = 1e-9


class SingularMatrix(ArithmeticError):
    pass


class CoincidentVertices(ValueError):
    pass


def vec(x, y, z) -> Vec:
    return (Fraction(x), Fraction(y), Fraction(z))


def vadd(a: Vec, b: Vec) -> Vec:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def vsub(a: Vec, b: Vec) -> Vec:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def vscale(c, a: Vec) -> Vec:
    return (c * a[0], c * a[1], c * a[2])


def dot(a: Vec, b: Vec) -> Fraction:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def cross(a: Vec, b: Vec) -> Vec:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def is_integral(x: Fraction) -> bool:
    return x.denominator == 1


def in_plane_A(v: Sequence[Fraction]) -> bool:
    return v[0] + v[1] + v[2] == 1


def in_lattice_Lambda(v: Sequence[Fraction]) -> bool:
    """Integer triples summing to 1 (the orbit of ``e1``)."""
    return all(is_integral(Fraction(c)) for c in v) and sum(v) == 1


def in_thirds_lattice(v: Sequence[Fraction]) -> bool:
    """Points ``(a/3, b/3, c/3)`` with ``a = b = c = 1 (mod 3)`` and ``a+b+c = 3``."""
    nums = [Fraction(c) * 3 for c in v]
    if not all(is_integral(n) for n in nums):
        return False
    ints = [n.numerator for n in nums]
    return sum(ints) == 3 and all(n % 3 == 1 for n in ints)


def common_denominator(v: Iterable[Fraction]) -> int:
    q = 1
    for c in v:
        q = math.lcm(q, c.denominator)
    return q


@dataclass(frozen=True)
class Mat3:
    """Row-major 3x3 matrix of Fractions. Hashable, compares by value."""

    entries: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.entries) != 9:
            raise ValueError("Mat3 needs exactly nine entries")
        object.__setattr__(
            self, "entries", tuple(e if type(e) is Fraction else Fraction(e) for e in self.entries)
        )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "Mat3":
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ValueError("expected a 3x3 nested sequence")
        return cls(tuple(e for r in rows for e in r))

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence]) -> "Mat3":
        return cls.from_rows([[cols[j][i] for j in range(3)] for i in range(3)])

    @classmethod
    def identity(cls) -> "Mat3":
        return cls((1, 0, 0, 0, 1, 0, 0, 0, 1))

    @classmethod
    def circulant(cls, c0, c1) -> "Mat3":
        """Circulant symmetric matrix: ``c0`` on the diagonal, ``c1`` elsewhere."""
        return cls((c0, c1, c1, c1, c0, c1, c1, c1, c0))

    def __getitem__(self, ij: Tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[3 * i + j]

    def rows(self) -> Tuple[Vec, Vec, Vec]:
        e = self.entries
        return (e[0:3], e[3:6], e[6:9])

    def col(self, j: int) -> Vec:
        e = self.entries
        return (e[j], e[3 + j], e[6 + j])

    def columns(self) -> Tuple[Vec, Vec, Vec]:
        return (self.col(0), self.col(1), self.col(2))

    def transpose(self) -> "Mat3":
        return Mat3.from_columns(self.rows())

    def __matmul__(self, other):
        if isinstance(other, Mat3):
            return mat_mul(self, other)
        return mat_vec(self, other)

    def __mul__(self, c) -> "Mat3":
        return Mat3(tuple(c * e for e in self.entries))

    __rmul__ = __mul__

    def __add__(self, other: "Mat3") -> "Mat3":
        return Mat3(tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Mat3") -> "Mat3":
        return Mat3(tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "Mat3":
        return Mat3(tuple(-a for a in self.entries))

    def det(self) -> Fraction:
        return det(self)

    def inverse(self) -> "Mat3":
        return inverse(self)

    def is_integer(self) -> bool:
        return all(e.denominator == 1 for e in self.entries)

    def column_sums(self) -> Vec:
        e = self.entries
        return (e[0] + e[3] + e[6], e[1] + e[4] + e[7], e[2] + e[5] + e[8])

    def int_rows(self) -> Tuple[Tuple[int, int, int], ...]:
        if not self.is_integer():
            raise ValueError("matrix has non-integer entries")
        return tuple(tuple(int(x) for x in r) for r in self.rows())

    def __str__(self) -> str:
        return "[" + ", ".join(
            "[" + ", ".join(str(x) for x in r) + "]" for r in self.rows()
        ) + "]"


def mat_mul(a: Mat3, b: Mat3) -> Mat3:
    x, y = a.entries, b.entries
    if a.is_integer() and b.is_integer():
        x = [int(e) for e in x]
        y = [int(e) for e in y]
    return Mat3(tuple(
        x[3 * i] * y[j] + x[3 * i + 1] * y[3 + j] + x[3 * i + 2] * y[6 + j]
        for i in range(3) for j in range(3)
    ))


def mat_vec(a: Mat3, v: Sequence[Fraction]) -> Vec:
    x = a.entries
    return (
        x[0] * v[0] + x[1] * v[1] + x[2] * v[2],
        x[3] * v[0] + x[4] * v[1] + x[5] * v[2],
        x[6] * v[0] + x[7] * v[1] + x[8] * v[2],
    )


def det(a: Mat3) -> Fraction:
    m = a.entries
    return (
        m[0] * (m[4] * m[8] - m[5] * m[7])
        - m[1] * (m[3] * m[8] - m[5] * m[6])
        + m[2] * (m[3] * m[7] - m[4] * m[6])
    )


def inverse(a: Mat3) -> Mat3:
    d = det(a)
    if d == 0:
        raise SingularMatrix(f"matrix {a} is singular")
    m = a.entries
    adj = (
        m[4] * m[8] - m[5] * m[7], m[2] * m[7] - m[1] * m[8], m[1] * m[5] - m[2] * m[4],
        m[5] * m[6] - m[3] * m[8], m[0] * m[8] - m[2] * m[6], m[2] * m[3] - m[0] * m[5],
        m[3] * m[7] - m[4] * m[6], m[1] * m[6] - m[0] * m[7], m[0] * m[4] - m[1] * m[3],
    )
    return Mat3(tuple(x / d for x in adj))


# ------------------------------------------------------------------ angles

@dataclass(frozen=True)
class VertexShape:
    """Angle triple measured from three plane points."""

    angles: Tuple[float, float, float]
    snapped: Vec
    flat: bool


def _normalized_angle(u: complex, w: complex) -> float:
    # Same angle as acos(Re(u conj w) / |u||w|), but atan2 keeps full
    # precision when the triangle is nearly flat.
    p = u * w.conjugate()
    return math.atan2(abs(p.imag), p.real) / math.pi


def snap(x: float, max_denominator: int) -> Fraction:
    """Best rational approximation with bounded denominator."""
    return Fraction(x).limit_denominator(max_denominator)


def shape_from_vertices(z1, z2, z3, max_denominator: int = 1000) -> VertexShape:
    """Normalized interior angles of the triangle ``z1 z2 z3``.

    Points may be complex numbers or ``(x, y)`` pairs. The rational snap
    rounds the first two angles and takes the third as the complement, so the
    snapped triple lies exactly on the plane.
    """
    z = [complex(*p) if not isinstance(p, complex) else p for p in (z1, z2, z3)]
    for i in range(3):
        if z[i] == z[(i + 1) % 3]:
            raise CoincidentVertices(f"vertices {i + 1} and {(i + 1) % 3 + 1} coincide")
    angles = tuple(
        _normalized_angle(z[(i + 2) % 3] - z[i], z[(i + 1) % 3] - z[i]) for i in range(3)
    )
    flat = any(a < FLAT_TOL for a in angles)
    a1 = snap(angles[0], max_denominator)
    a2 = snap(angles[1], max_denominator)
    return VertexShape(angles, (a1, a2, 1 - a1 - a2), flat)
