"""The wallpaper group p6m acting on the angle plane, and reduction to D.

Two angle triples describe the same similarity class ("re-expressions" of
each other) exactly when some group element maps one to the other. Every
orbit meets the fundamental domain

    D = {a1 >= a2 >= a3 >= 0, a1 + a2 + a3 = 1}

in exactly one point, its canonical form.

Points close to a lattice point that lie in one orbit are related by the
stabilizer of that lattice point once they are within
``(3 - sqrt 7) / (3 sqrt 6)`` of each other. That radius only matters for
proofs. Nothing here computes with it; preservation of re-expression is
checked by exact randomized tests in :mod:`trimaps.atm` instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Sequence, Tuple

from .exact import Mat3, Vec, in_plane_A, vec

Word = Tuple[Tuple[str, int], ...]

# Vertices of D: barycenter of A_p, lattice point, right-isoceles point.
B = vec(Fraction(1, 3), Fraction(1, 3), Fraction(1, 3))
V2 = vec(1, 0, 0)
V3 = vec(Fraction(1, 2), Fraction(1, 2), 0)
D_VERTICES: Tuple[Vec, Vec, Vec] = (B, V2, V3)
E1, E2, E3 = vec(1, 0, 0), vec(0, 1, 0), vec(0, 0, 1)

# Barycenter of D itself; only used in docs and figures.
D_BARY = vec(Fraction(11, 18), Fraction(5, 18), Fraction(2, 18))


class NotOnPlaneA(ValueError):
    pass


class UnknownGenerator(KeyError):
    pass


class LimitExceeded(ValueError):
    pass


_RAW = {
    "P12": ((0, 1, 0), (1, 0, 0), (0, 0, 1)),
    "P13": ((0, 0, 1), (0, 1, 0), (1, 0, 0)),
    "P23": ((1, 0, 0), (0, 0, 1), (0, 1, 0)),
    "R": ((1, 0, 1), (0, 1, 1), (0, 0, -1)),
    "Ra": ((-1, 0, 0), (1, 0, 1), (1, 1, 0)),
    "Rb": ((0, 1, 1), (0, -1, 0), (1, 1, 0)),
    "Rc": ((0, 1, 1), (1, 0, 1), (0, 0, -1)),
}
_BASE = {k: Mat3.from_rows(v) for k, v in _RAW.items()}
_BASE["Tx"] = _BASE["Rb"] @ _BASE["Ra"]
_BASE["Ty"] = _BASE["Rc"] @ _BASE["Rb"]

GENERATOR_LABELS = ("P12", "P13", "P23", "R", "Ra", "Rb", "Rc", "Tx", "Ty")
INVOLUTIONS = frozenset(GENERATOR_LABELS[:7])


def translation_matrix(d: Sequence) -> Mat3:
    """``I + d 1^T``: acts on the plane as translation by ``d`` (sum of ``d`` is 0)."""
    d = [Fraction(c) for c in d]
    if all(c.denominator == 1 for c in d):
        d = [int(c) for c in d]
    return Mat3(tuple(d[i] + (i == j) for i in range(3) for j in range(3)))


@lru_cache(maxsize=None)
def _generator_power(label: str, exp: int) -> Mat3:
    if label not in _BASE:
        raise UnknownGenerator(label)
    if label in INVOLUTIONS:
        return _BASE[label] if exp % 2 else Mat3.identity()
    step = (1, -1, 0) if label == "Tx" else (0, 1, -1)
    return translation_matrix([exp * c for c in step])


def _reduce(word: Iterable[Tuple[str, int]]) -> Word:
    out: List[Tuple[str, int]] = []
    for label, exp in word:
        if out and out[-1][0] == label:
            exp += out.pop()[1]
        if label in INVOLUTIONS:
            exp %= 2
        if exp:
            out.append((label, exp))
    return tuple(out)


def word_matrix(word: Word) -> Mat3:
    m = Mat3.identity()
    for label, exp in word:
        m = m @ _generator_power(label, exp)
    return m


@dataclass(frozen=True)
class GroupElement:
    """An element of G as an integer matrix together with a generator word.

    The word ``((l1, e1), (l2, e2), ...)`` denotes ``l1**e1 @ l2**e2 @ ...``.
    Equality and hashing use the matrix only.
    """

    matrix: Mat3
    word: Word = field(compare=False)

    @classmethod
    def from_word(cls, word: Iterable[Tuple[str, int]]) -> "GroupElement":
        w = _reduce(word)
        return cls(word_matrix(w), w)

    @classmethod
    def identity(cls) -> "GroupElement":
        return cls(Mat3.identity(), ())

    def __matmul__(self, other):
        if isinstance(other, GroupElement):
            return GroupElement(self.matrix @ other.matrix, _reduce(self.word + other.word))
        return self.matrix @ other

    def inverse(self) -> "GroupElement":
        w = tuple((l, -e) for l, e in reversed(self.word))
        return GroupElement(self.matrix.inverse(), _reduce(w))

    def word_str(self) -> str:
        if not self.word:
            return "id"
        return "*".join(l if e == 1 else f"{l}^{e}" for l, e in self.word)


def generator(label: str) -> GroupElement:
    if label not in _BASE:
        raise UnknownGenerator(label)
    return GroupElement(_BASE[label], ((label, 1),))


def translation(d: Sequence) -> GroupElement:
    """Group element translating the plane by the integer sum-zero vector ``d``."""
    if any(Fraction(c).denominator != 1 for c in d) or sum(d) != 0:
        raise ValueError(f"{d} is not a lattice translation")
    a, b = int(d[0]), int(d[0] + d[1])
    return GroupElement(translation_matrix(d), _reduce((("Tx", a), ("Ty", b))))


@lru_cache(maxsize=None)
def _permutation_elements() -> Dict[Mat3, GroupElement]:
    out = {Mat3.identity(): GroupElement.identity()}
    frontier = [GroupElement.identity()]
    while frontier:
        nxt = []
        for g in frontier:
            for lab in ("P12", "P13", "P23"):
                h = g @ generator(lab)
                if h.matrix not in out:
                    out[h.matrix] = h
                    nxt.append(h)
        frontier = nxt
    return out


def sorting_element(v: Vec) -> GroupElement:
    """Permutation (as a group element) that sorts ``v`` descending, stably."""
    order = tuple(sorted(range(3), key=lambda i: -v[i]))
    return _permutations_by_order()[order]


@lru_cache(maxsize=None)
def _permutations_by_order() -> Dict[Tuple[int, ...], GroupElement]:
    """Permutation elements keyed by the source index of each output coordinate."""
    return {tuple(r.index(1) for r in m.rows()): g for m, g in _permutation_elements().items()}


# ------------------------------------------------------------------ shapes

@dataclass(frozen=True)
class RationalShape:
    v: Vec

    def __post_init__(self):
        if not in_plane_A(self.v):
            raise NotOnPlaneA(f"{fmt_vec(self.v)} is not on plane A")


@dataclass(frozen=True)
class CanonicalShape:
    """A point of the fundamental domain D."""

    v: Vec

    def __post_init__(self):
        object.__setattr__(self, "v", tuple(Fraction(c) for c in self.v))
        if not in_D(self.v):
            raise ValueError(f"{fmt_vec(self.v)} is not in D")

    @classmethod
    def of(cls, *coords) -> "CanonicalShape":
        return cls(tuple(Fraction(c) for c in coords))

    def __str__(self) -> str:
        return fmt_vec(self.v)


def fmt_vec(v: Sequence) -> str:
    return ",".join(str(Fraction(c)) for c in v)


def in_D(v: Sequence[Fraction]) -> bool:
    if not in_plane_A(v):
        raise NotOnPlaneA(f"{fmt_vec(v)} is not on plane A")
    return v[0] >= v[1] >= v[2] >= 0


def _check_plane(v: Sequence[Fraction]) -> Vec:
    v = tuple(Fraction(c) for c in v)
    if len(v) != 3 or not in_plane_A(v):
        raise NotOnPlaneA(f"{fmt_vec(v)} is not on plane A")
    return v


def canonical_vec(v: Sequence[Fraction]) -> Vec:
    """Canonical point of D for ``v``, without building the group element."""
    v = _check_plane(v)
    f = [c - math.floor(c) for c in v]
    s = f[0] + f[1] + f[2]
    if s == 0:
        return V2
    if s == 2:
        f = [1 - c for c in f]
    f.sort(reverse=True)
    return (f[0], f[1], f[2])


def canonical_numerators(n: Sequence[int], q: int) -> Tuple[int, int, int]:
    """Integer version of :func:`canonical_vec` for the point ``n / q``.

    ``n`` must sum to ``q``; the result is the numerator triple over the same
    ``q``. Hot loops (orbits, statistics, oracles) go through here.
    """
    f0, f1, f2 = n[0] % q, n[1] % q, n[2] % q
    s = f0 + f1 + f2
    if s == 0:
        return (q, 0, 0)
    if s == 2 * q:
        f0, f1, f2 = q - f0, q - f1, q - f2
    if f0 < f1:
        f0, f1 = f1, f0
    if f1 < f2:
        f1, f2 = f2, f1
        if f0 < f1:
            f0, f1 = f1, f0
    return (f0, f1, f2)


def canonicalize(v: Sequence[Fraction]) -> CanonicalShape:
    return CanonicalShape(canonical_vec(v))


def canonicalize_with_element(v: Sequence[Fraction]) -> Tuple[CanonicalShape, GroupElement]:
    """Canonical form of ``v`` together with some ``g`` in G with ``g v`` equal to it."""
    v = _check_plane(v)
    ints = [math.floor(c) for c in v]
    f = [c - n for c, n in zip(v, ints)]
    s = sum(f)
    if s == 0:
        g = translation([a - b for a, b in zip(V2, v)])
    elif s == 1:
        g = translation([-n for n in ints])
    else:
        # land on (f1 - 1, f2, f3), then Ra sends it to (1-f1, 1-f2, 1-f3)
        target = (f[0] - 1, f[1], f[2])
        g = generator("Ra") @ translation([a - b for a, b in zip(target, v)])
    w = g @ v
    g = sorting_element(w) @ g
    return CanonicalShape(tuple(sorted(w, reverse=True))), g


def is_equivalent(v: Sequence[Fraction], w: Sequence[Fraction]) -> bool:
    return canonical_vec(v) == canonical_vec(w)


def point_group_order(p) -> int:
    """Order of the stabilizer of a point of D: 1, 2, 4, 6 or 12."""
    v = p.v if isinstance(p, CanonicalShape) else tuple(Fraction(c) for c in p)
    if not in_D(v):
        raise ValueError(f"{fmt_vec(v)} is not in D")
    if v == V2:
        return 12
    if v == B:
        return 6
    if v == V3:
        return 4
    if v[0] == v[1] or v[1] == v[2] or v[2] == 0:
        return 2
    return 1


# ------------------------------------------------------------------ enumeration

MAX_BALL = 12


@lru_cache(maxsize=None)
def _ball_layers(n: int) -> Tuple[Tuple[GroupElement, ...], ...]:
    if n == 0:
        return ((GroupElement.identity(),),)
    layers = _ball_layers(n - 1)
    seen = {g.matrix for layer in layers for g in layer}
    new = []
    for g in layers[-1]:
        for lab in GENERATOR_LABELS:
            h = g @ generator(lab)
            if h.matrix not in seen:
                seen.add(h.matrix)
                new.append(h)
    return layers + (tuple(new),)


def enumerate_group_ball(max_word_length: int) -> frozenset:
    """All elements of G that are products of at most ``max_word_length`` generators."""
    if max_word_length < 0 or max_word_length > MAX_BALL:
        raise LimitExceeded(f"word length {max_word_length} outside [0, {MAX_BALL}]")
    return frozenset(g for layer in _ball_layers(max_word_length) for g in layer)


def group_ball_list(max_word_length: int) -> List[GroupElement]:
    """Same elements as :func:`enumerate_group_ball`, in a fixed (BFS) order."""
    if max_word_length < 0 or max_word_length > MAX_BALL:
        raise LimitExceeded(f"word length {max_word_length} outside [0, {MAX_BALL}]")
    return [g for layer in _ball_layers(max_word_length) for g in layer]


@lru_cache(maxsize=None)
def point_group_at_e1() -> Tuple[GroupElement, ...]:
    """The 12 elements of G fixing ``e1``, identity first."""
    out = []
    for g in group_ball_list(8):
        if g @ E1 == E1:
            out.append(g)
    if len(out) != 12:
        raise RuntimeError(f"found {len(out)} elements fixing e1, expected 12")
    return tuple(out)


@lru_cache(maxsize=256)
def point_group_at(p: Vec) -> Tuple[GroupElement, ...]:
    """Stabilizer of a lattice point ``p``, conjugated from the one at ``e1``."""
    t = translation([a - b for a, b in zip(p, E1)])
    ti = t.inverse()
    return tuple(t @ h @ ti for h in point_group_at_e1())


@lru_cache(maxsize=None)
def group_ball_int_rows(max_word_length: int) -> Tuple[Tuple[Tuple[int, ...], ...], ...]:
    """Integer rows of :func:`group_ball_list` elements, same order."""
    return tuple(g.matrix.int_rows() for g in group_ball_list(max_word_length))


def brute_force_canonical(v: Sequence[Fraction], max_word_length: int = 10) -> List[Vec]:
    """Every point of D reachable from ``v`` by generator words of bounded length.

    Breadth-first search over orbit points using integer numerators over the
    common denominator of ``v``. Independent of :func:`canonicalize`; used as
    its test oracle.
    """
    v = _check_plane(v)
    q = math.lcm(*(c.denominator for c in v))
    start = tuple(int(c * q) for c in v)
    gens = [_BASE[l].int_rows() for l in GENERATOR_LABELS]
    seen = {start}
    frontier = [start]
    hits = set()
    for depth in range(max_word_length + 1):
        for x in frontier:
            if x[0] >= x[1] >= x[2] >= 0:
                hits.add(x)
        if depth == max_word_length:
            break
        nxt = []
        for x in frontier:
            for m in gens:
                y = (
                    m[0][0] * x[0] + m[0][1] * x[1] + m[0][2] * x[2],
                    m[1][0] * x[0] + m[1][1] * x[1] + m[1][2] * x[2],
                    m[2][0] * x[0] + m[2][1] * x[1] + m[2][2] * x[2],
                )
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(tuple(Fraction(c, q) for c in h) for h in hits)
