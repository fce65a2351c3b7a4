"""Markov partitions of D for linear triangle maps, and symbolic coding.

The image ``M D`` is a union of ``|det M|`` tiles ``g D`` of the p6m
tiling. Pulling each tile back through ``M`` gives a cell of D that the map
sends onto D, so the map is a full-branch expanding map on ``|det M|``
symbols.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, FrozenSet, List, Sequence, Tuple

from .atm import Atm
from .exact import Vec, cross, dot, vsub
from .moduli import (
    D_VERTICES,
    CanonicalShape,
    GroupElement,
    canonical_numerators,
    canonical_vec,
    point_group_at_e1,
    translation,
)

Triangle = Tuple[Vec, Vec, Vec]
# Integer linear forms on numerator triples; a point is inside when all are >= 0.
Forms = Tuple[Tuple[int, int, int], ...]


class PartitionCountMismatch(RuntimeError):
    pass


class EdgeNotOnReflectionLine(RuntimeError):
    pass


@dataclass(frozen=True)
class Cell:
    """``polygon[i]`` is sent to ``D_VERTICES[i]`` by the branch ``unfold^-1 M``."""

    index: int
    unfold: GroupElement
    polygon: Triangle
    forms: Forms = field(compare=False, repr=False)


@dataclass(frozen=True)
class MarkovPartition:
    atm: Atm
    cells: Tuple[Cell, ...]

    def __len__(self) -> int:
        return len(self.cells)


@dataclass(frozen=True)
class Itinerary:
    start: CanonicalShape
    symbols: Tuple[int, ...]
    boundary_steps: FrozenSet[int]

    def word(self) -> str:
        sep = "" if max(self.symbols, default=0) < 10 else " "
        return sep.join(str(s) for s in self.symbols)


# ------------------------------------------------------------------ geometry

def _orient(p: Vec, q: Vec, r: Vec) -> Fraction:
    """Twice the signed area of ``pqr`` after projecting the plane to (x, y)."""
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def contains(tri: Triangle, p: Vec) -> bool:
    """Closed point-in-triangle test by exact orientation signs."""
    s = [_orient(tri[0], tri[1], p), _orient(tri[1], tri[2], p), _orient(tri[2], tri[0], p)]
    return all(x >= 0 for x in s) or all(x <= 0 for x in s)


def on_boundary(tri: Triangle, p: Vec) -> bool:
    return contains(tri, p) and any(
        _orient(tri[i], tri[(i + 1) % 3], p) == 0 for i in range(3)
    )


def area_squared(tri: Triangle) -> Fraction:
    """Squared Euclidean area of a triangle in R^3."""
    c = cross(vsub(tri[1], tri[0]), vsub(tri[2], tri[0]))
    return dot(c, c) / 4


def squared_sides(tri: Triangle) -> List[Fraction]:
    return sorted(dot(d, d) for d in (vsub(tri[i], tri[(i + 1) % 3]) for i in range(3)))


def _edge_forms(tri: Triangle) -> Forms:
    """Integer forms ``f`` with ``f . n >= 0`` iff ``n / sum(n)`` is in the closed triangle."""
    sign = 1 if _orient(*tri) > 0 else -1
    forms = []
    for i in range(3):
        p, q = tri[i], tri[(i + 1) % 3]
        # orient(p, q, x) = a x + b y + c, homogenized with c (x + y + z)
        a = -(q[1] - p[1])
        b = q[0] - p[0]
        c = -(b * p[1] + a * p[0])
        coeffs = [sign * (a + c), sign * (b + c), sign * c]
        den = math.lcm(*(Fraction(x).denominator for x in coeffs))
        ints = [int(x * den) for x in coeffs]
        g = math.gcd(*ints) or 1
        forms.append(tuple(x // g for x in ints))
    return tuple(forms)


_REFLECTION_FORMS = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, -1, 0), (0, 1, -1), (1, 0, -1))


def _on_common_reflection_line(p: Vec, q: Vec) -> bool:
    for f in _REFLECTION_FORMS:
        a, b = dot(f, p), dot(f, q)
        if a == b and a.denominator == 1:
            return True
    return False


# ------------------------------------------------------------------ construction

def _lattice_coords(v: Vec) -> Tuple[Fraction, Fraction]:
    """``(a, b)`` with ``v = e1 + a (e1 - e2) + b (e2 - e3)``."""
    return v[0] - 1, -v[2]


@lru_cache(maxsize=None)
def _hexagon() -> Tuple[Tuple[GroupElement, Triangle], ...]:
    """The 12 tiles ``h D`` around ``e1``."""
    return tuple((h, tuple(h @ v for v in D_VERTICES)) for h in point_group_at_e1())


def build_partition(a: Atm) -> MarkovPartition:
    m = a.matrix
    md = tuple(m @ v for v in D_VERTICES)
    for i in range(3):
        if not _on_common_reflection_line(md[i], md[(i + 1) % 3]):
            raise EdgeNotOnReflectionLine(
                f"edge {md[i]}-{md[(i + 1) % 3]} of M D is not on a reflection line"
            )

    coords = [_lattice_coords(v) for v in md]
    lo_a = math.floor(min(c[0] for c in coords)) - 2
    hi_a = math.ceil(max(c[0] for c in coords)) + 2
    lo_b = math.floor(min(c[1] for c in coords)) - 2
    hi_b = math.ceil(max(c[1] for c in coords)) + 2

    inv = m.inverse()
    cells = []
    for ta in range(lo_a, hi_a + 1):
        for tb in range(lo_b, hi_b + 1):
            shift = (Fraction(ta), Fraction(tb - ta), Fraction(-tb))
            t = None
            for h, tile in _hexagon():
                moved = tuple((v[0] + shift[0], v[1] + shift[1], v[2] + shift[2]) for v in tile)
                if all(contains(md, v) for v in moved):
                    t = t or translation(shift)
                    g = t @ h
                    polygon = tuple(inv @ v for v in moved)
                    cells.append((g, polygon))

    if len(cells) != a.abs_det:
        raise PartitionCountMismatch(f"found {len(cells)} tiles in M D, expected {a.abs_det}")
    cells.sort(key=lambda c: sorted(c[1]))
    return MarkovPartition(
        a, tuple(Cell(i, g, poly, _edge_forms(poly)) for i, (g, poly) in enumerate(cells))
    )


# ------------------------------------------------------------------ coding

def _locate_numerators(cells: Sequence[Cell], n: Sequence[int]) -> Tuple[int, bool]:
    found = -1
    for cell in cells:
        for f in cell.forms:
            if f[0] * n[0] + f[1] * n[1] + f[2] * n[2] < 0:
                break
        else:
            if found >= 0:
                return found, True
            found = cell.index
    if found < 0:
        raise AssertionError(f"point {n} is in no cell")
    return found, False


def locate(mp: MarkovPartition, p) -> Tuple[int, bool]:
    """Lowest index of a cell containing ``p``, and whether another cell also contains it.

    Points on the outer boundary of D belong to one cell only and are not
    reported as boundary points; only shared edges make the symbol ambiguous.
    """
    v = p.v if isinstance(p, CanonicalShape) else CanonicalShape.of(*p).v
    q = math.lcm(*(c.denominator for c in v))
    return _locate_numerators(mp.cells, [int(c * q) for c in v])


def _itinerary_numerators(mp: MarkovPartition, n: Tuple[int, int, int], q: int, length: int):
    (m00, m01, m02), (m10, m11, m12), (m20, m21, m22) = mp.atm.matrix.int_rows()
    symbols = []
    boundary = []
    for i in range(length):
        s, edge = _locate_numerators(mp.cells, n)
        symbols.append(s)
        if edge:
            boundary.append(i)
        a0, a1, a2 = n
        n = canonical_numerators(
            (m00 * a0 + m01 * a1 + m02 * a2, m10 * a0 + m11 * a1 + m12 * a2, m20 * a0 + m21 * a1 + m22 * a2),
            q,
        )
    return symbols, boundary


def itinerary(mp: MarkovPartition, p, n: int) -> Itinerary:
    if n < 1:
        raise ValueError("itinerary length must be >= 1")
    p = p if isinstance(p, CanonicalShape) else CanonicalShape.of(*p)
    q = math.lcm(*(c.denominator for c in p.v))
    symbols, boundary = _itinerary_numerators(mp, tuple(int(c * q) for c in p.v), q, n)
    return Itinerary(p, tuple(symbols), frozenset(boundary))


# ------------------------------------------------------------------ verification

def check_markov(mp: MarkovPartition, samples_per_cell: int = 20, seed: int = 0) -> List[str]:
    """Problems found with the partition; empty when it is a valid Markov partition."""
    if samples_per_cell < 1:
        raise ValueError("samples_per_cell must be >= 1")
    problems = []
    m = mp.atm.matrix
    k = mp.atm.abs_det
    d_area = area_squared(D_VERTICES)
    d_sides = squared_sides(D_VERTICES)
    if len(mp.cells) != k:
        problems.append(f"{len(mp.cells)} cells, expected {k}")
    rng = random.Random(seed)
    for cell in mp.cells:
        images = [canonical_vec(m @ v) for v in cell.polygon]
        if images != list(D_VERTICES):
            problems.append(f"cell {cell.index}: vertices map to {images}, not onto D")
        if area_squared(cell.polygon) * k * k != d_area:
            problems.append(f"cell {cell.index}: area is not area(D)/{k}")
        if [s * k for s in squared_sides(cell.polygon)] != d_sides:
            problems.append(f"cell {cell.index}: not congruent to a scaled copy of D")
        branch = cell.unfold.inverse().matrix @ m
        for _ in range(samples_per_cell):
            w = [rng.randint(1, 1000) for _ in range(3)]
            x = tuple(
                sum(w[i] * cell.polygon[i][j] for i in range(3)) / sum(w) for j in range(3)
            )
            where = locate(mp, x)
            if where != (cell.index, False):
                problems.append(f"cell {cell.index}: interior sample located at {where}")
                break
            if canonical_vec(m @ x) != branch @ x:
                problems.append(f"cell {cell.index}: branch map disagrees with the step")
                break
    return problems


def verify_markov(mp: MarkovPartition, samples_per_cell: int = 20, seed: int = 0) -> bool:
    return not check_markov(mp, samples_per_cell, seed)


# ------------------------------------------------------------------ statistics

@dataclass(frozen=True)
class SymbolStatistics:
    symbols: int
    length: int
    kept: int
    discarded: int
    single_counts: Tuple[int, ...]
    pair_counts: Dict[Tuple[int, int], int]

    @property
    def single_total(self) -> int:
        return self.kept * self.length

    @property
    def pair_total(self) -> int:
        return self.kept * (self.length - 1)

    def single_frequency(self, s: int) -> float:
        return self.single_counts[s] / self.single_total

    def pair_frequency(self, s: int, t: int) -> float:
        return self.pair_counts.get((s, t), 0) / self.pair_total

    def single_sigma(self) -> float:
        p = 1 / self.symbols
        return math.sqrt(p * (1 - p) / self.single_total)

    def pair_sigma(self) -> float:
        p = 1 / self.symbols ** 2
        return math.sqrt(p * (1 - p) / self.pair_total) if self.pair_total else 0.0

    def single_z(self) -> List[float]:
        sig = self.single_sigma()
        p = 1 / self.symbols
        return [(self.single_frequency(s) - p) / sig if sig else 0.0 for s in range(self.symbols)]

    def pair_z(self) -> Dict[Tuple[int, int], float]:
        sig = self.pair_sigma()
        p = 1 / self.symbols ** 2
        return {
            (s, t): (self.pair_frequency(s, t) - p) / sig if sig else 0.0
            for s in range(self.symbols) for t in range(self.symbols)
        }


@lru_cache(maxsize=None)
def _primes(lo: int, hi: int) -> Tuple[int, ...]:
    sieve = bytearray([1]) * (hi + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(hi) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(sieve[i * i::i]))
    return tuple(i for i in range(lo, hi + 1) if sieve[i])


def random_start(rng: random.Random, lo: int = 10 ** 4, hi: int = 10 ** 5) -> Tuple[Tuple[int, int, int], int]:
    """Uniform grid point of D with a random prime denominator in ``[lo, hi]``."""
    q = rng.choice(_primes(lo, hi))
    while True:
        a = rng.randint(0, q)
        b = rng.randint(0, q)
        c = q - a - b
        if a >= b >= c >= 0:
            return (a, b, c), q


CHUNK = 100


def _stats_chunk(args):
    mp, seed, chunk, count, n = args
    rng = random.Random(f"{seed}:{chunk}")
    k = mp.atm.abs_det
    singles = [0] * k
    pairs: Dict[Tuple[int, int], int] = {}
    kept = 0
    for _ in range(count):
        start, q = random_start(rng)
        symbols, boundary = _itinerary_numerators(mp, start, q, n)
        if boundary:
            continue
        kept += 1
        for s in symbols:
            singles[s] += 1
        for s, t in zip(symbols, symbols[1:]):
            pairs[(s, t)] = pairs.get((s, t), 0) + 1
    return kept, singles, pairs


def symbol_statistics(
    mp: MarkovPartition, num_points: int, n: int, seed: int = 0, workers: int = 1
) -> SymbolStatistics:
    """Symbol and adjacent-pair counts over random itineraries.

    Orbits touching a cell boundary are discarded. Starts are drawn in chunks
    with per-chunk seeds, so the result does not depend on ``workers``.
    """
    if num_points < 1 or n < 1:
        raise ValueError("num_points and n must be >= 1")
    jobs = []
    for chunk, lo in enumerate(range(0, num_points, CHUNK)):
        jobs.append((mp, seed, chunk, min(CHUNK, num_points - lo), n))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_stats_chunk, jobs))
    else:
        results = [_stats_chunk(j) for j in jobs]

    k = mp.atm.abs_det
    singles = [0] * k
    pairs: Dict[Tuple[int, int], int] = {}
    kept = 0
    for r_kept, r_singles, r_pairs in results:
        kept += r_kept
        singles = [a + b for a, b in zip(singles, r_singles)]
        for key, v in r_pairs.items():
            pairs[key] = pairs.get(key, 0) + v
    return SymbolStatistics(k, n, kept, num_points - kept, tuple(singles), pairs)
