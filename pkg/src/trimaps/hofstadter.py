"""Hofstadter factorizations of Type I inverse matrices.

``H_{A,r}`` shrinks the shape simplex towards ``e1`` by ``r``; ``H_B`` and
``H_C`` are its conjugates fixing ``e2`` and ``e3``. For a Type I matrix M
with repeated eigenvalue ``c0 - c1``, either ``K = M^-1`` (positive
eigenvalue) or ``K = M^-1 P`` (negative eigenvalue, P the pedal matrix) is a
positive homothety about the barycenter, and

    K = H_A(r1) H_B(r2) H_C(r3)

with ``r1 = 1 - k1``, ``r2 = (1 - 2 k1) / (1 - k1)``, ``r3 = (k0 - k1) / k0``
for ``K = circ(k0; k1)``. The factor order A, B, C is a convention; other
orders give other valid factorizations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from .atm import ANTIPEDAL, PEDAL, TYPE_I, Atm, normal_form
from .exact import Mat3


class DegenerateFactor(ValueError):
    pass


class FactorOutOfRange(ValueError):
    def __init__(self, r: Tuple[Fraction, Fraction, Fraction]):
        super().__init__("Hofstadter factors outside (0, 1): " + ",".join(str(x) for x in r))
        self.r = r


class ZeroDenominator(ZeroDivisionError):
    pass


def h_matrix(vertex: str, r) -> Mat3:
    r = Fraction(r)
    if r == 0:
        raise DegenerateFactor("Hofstadter ratio must be nonzero")
    s = 1 - r
    if vertex == "A":
        return Mat3.from_rows([[1, s, s], [0, r, 0], [0, 0, r]])
    if vertex == "B":
        return Mat3.from_rows([[r, 0, 0], [s, 1, s], [0, 0, r]])
    if vertex == "C":
        return Mat3.from_rows([[r, 0, 0], [0, r, 0], [s, s, 1]])
    raise ValueError(f"vertex must be A, B or C, not {vertex!r}")


@dataclass(frozen=True)
class HofstadterDecomposition:
    source: Mat3
    r: Tuple[Fraction, Fraction, Fraction]
    uses_antipedal: bool
    factors: Tuple[Mat3, ...]

    @property
    def r1(self) -> Fraction:
        return self.r[0]

    @property
    def r2(self) -> Fraction:
        return self.r[1]

    @property
    def r3(self) -> Fraction:
        return self.r[2]


def hofstadter_ratios(k0: Fraction, k1: Fraction) -> Tuple[Fraction, Fraction, Fraction]:
    if k0 == 0 or k1 == 1:
        raise ZeroDenominator(f"no ratios for circ({k0}; {k1})")
    return (1 - k1, (1 - 2 * k1) / (1 - k1), (k0 - k1) / k0)


def decompose(a: Atm) -> HofstadterDecomposition:
    """Factor the inverse of a Type I normal form into Hofstadter matrices.

    The pedal map itself is the degenerate case: ``K`` is the identity, all
    ratios are 1 and the only factor is the antipedal matrix.
    """
    if a.kind != TYPE_I or a.c1 == 0:
        raise ValueError("decomposition needs a non-identity Type I ATM")
    m = normal_form(a)
    inv = m.inverse()
    uses_antipedal = a.c0 - a.c1 < 0
    k = inv @ PEDAL if uses_antipedal else inv
    k0, k1 = k[0, 0], k[0, 1]
    if k == Mat3.identity():
        one = Fraction(1)
        return HofstadterDecomposition(m, (one, one, one), True, (ANTIPEDAL,))
    r = hofstadter_ratios(k0, k1)
    if not all(0 < x < 1 for x in r):
        raise FactorOutOfRange(r)
    factors = (h_matrix("A", r[0]), h_matrix("B", r[1]), h_matrix("C", r[2]))
    if factors[0] @ factors[1] @ factors[2] != k:
        raise AssertionError(f"Hofstadter product does not reproduce {k}")
    if uses_antipedal:
        factors += (ANTIPEDAL,)
    return HofstadterDecomposition(m, r, uses_antipedal, factors)


def recompose(d: HofstadterDecomposition) -> Mat3:
    out = Mat3.identity()
    for f in d.factors:
        out = out @ f
    return out
