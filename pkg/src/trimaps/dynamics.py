"""Iterating linear triangle maps on the fundamental domain.

A linear triangle map sends ``p`` in D to the canonical form of ``M p``.
Orbits of rational shapes keep a bounded denominator, so they are eventually
periodic; :func:`orbit` finds the cycle by exact lookup.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Tuple, Union

from .atm import ANTIPEDAL, PEDAL, TYPE_I, Atm, make_atm
from .exact import Mat3
from .moduli import CanonicalShape, canonical_numerators, canonical_vec

HALF = Fraction(1, 2)

PEDAL_ATM = make_atm(TYPE_I, (-1, 1))


class NoCycleWithinBound(RuntimeError):
    pass


@dataclass(frozen=True)
class DegenerateRight:
    """Returned by :func:`hobson_pedal_step` for right triangles."""

    shape: CanonicalShape


@dataclass(frozen=True)
class OrbitRecord:
    start: CanonicalShape
    preperiod: int
    period: int
    transient: Tuple[CanonicalShape, ...]
    cycle: Tuple[CanonicalShape, ...]
    hit_flat: bool
    hit_right: bool

    def iterates(self) -> Tuple[CanonicalShape, ...]:
        return self.transient + self.cycle


def _matrix(a: Union[Atm, Mat3]) -> Mat3:
    return a.matrix if isinstance(a, Atm) else a


def _shape(p) -> CanonicalShape:
    return p if isinstance(p, CanonicalShape) else CanonicalShape.of(*p)


def step(a: Union[Atm, Mat3], p) -> CanonicalShape:
    p = _shape(p)
    return CanonicalShape(canonical_vec(_matrix(a) @ p.v))


def hobson_pedal_step(p) -> Union[CanonicalShape, DegenerateRight]:
    """Pedal map from the classical piecewise angle formulas (no linear extension)."""
    p = _shape(p)
    a, b, c = p.v
    if a < HALF:
        nxt = [1 - 2 * a, 1 - 2 * b, 1 - 2 * c]
    elif a > HALF:
        nxt = [2 * a - 1, 2 * b, 2 * c]
    else:
        return DegenerateRight(p)
    nxt.sort(reverse=True)
    return CanonicalShape(tuple(nxt))


def antipedal_step(p) -> CanonicalShape:
    """The unique acute (or right) ancestor under the pedal map."""
    p = _shape(p)
    v = sorted(ANTIPEDAL @ p.v, reverse=True)
    return CanonicalShape(tuple(v))


def preimages(a: Atm, p, partition=None) -> FrozenSet[CanonicalShape]:
    """All shapes mapped to ``p``: one per Markov cell, fewer on cell boundaries."""
    from .markov import build_partition

    p = _shape(p)
    mp = partition or build_partition(a)
    inv = a.matrix.inverse()
    return frozenset(
        CanonicalShape(canonical_vec(inv @ (cell.unfold @ p.v))) for cell in mp.cells
    )


def is_flat(p: CanonicalShape) -> bool:
    return p.v[2] == 0


def is_right(p: CanonicalShape) -> bool:
    return HALF in p.v


def orbit_bound(q: int) -> int:
    """Number of points of D with denominator dividing ``q``, an upper bound on orbit length."""
    return (q + 1) * (q + 2) // 2


def orbit(a: Union[Atm, Mat3], p, max_steps: Optional[int] = None) -> OrbitRecord:
    """Iterate until the first repeated shape.

    Integer matrices keep every iterate on the grid ``(1/q) Z^3`` where ``q``
    is the denominator of the start, so the loop runs on integer numerators.
    """
    p = _shape(p)
    m = _matrix(a)
    if not m.is_integer():
        raise ValueError("orbit needs an integer matrix")
    q = math.lcm(*(c.denominator for c in p.v))
    if max_steps is None:
        max_steps = orbit_bound(q) + 1
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    (m00, m01, m02), (m10, m11, m12), (m20, m21, m22) = m.int_rows()

    x = tuple(int(c * q) for c in p.v)
    seen: Dict[Tuple[int, int, int], int] = {}
    path: List[Tuple[int, int, int]] = []
    for i in range(max_steps + 1):
        if x in seen:
            j = seen[x]
            shapes = [CanonicalShape(tuple(Fraction(c, q) for c in y)) for y in path]
            return OrbitRecord(
                start=p,
                preperiod=j,
                period=i - j,
                transient=tuple(shapes[:j]),
                cycle=tuple(shapes[j:]),
                hit_flat=any(y[2] == 0 for y in path),
                hit_right=any(2 * c == q for y in path for c in y),
            )
        seen[x] = i
        path.append(x)
        a0, a1, a2 = x
        x = canonical_numerators(
            (m00 * a0 + m01 * a1 + m02 * a2, m10 * a0 + m11 * a1 + m12 * a2, m20 * a0 + m21 * a1 + m22 * a2),
            q,
        )
    raise NoCycleWithinBound(f"no repeat within {max_steps} steps from {p}")


def pedal_orbit(p, max_steps: Optional[int] = None) -> OrbitRecord:
    return orbit(PEDAL, p, max_steps)
