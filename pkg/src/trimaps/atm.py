"""Angle transition matrices: validation, classification and catalogs.

An angle transition matrix (ATM) is an invertible linear map preserving the
plane and the re-expression relation. Up to left multiplication by a group
element it has one of three normal forms:

* Type I   ``circ(c0; c1)`` with integer ``c0 + 2 c1 = 1``;
* Type II  ``Tw^-1 circ(c0/3; c1/3)`` with ``c0 + 2 c1 = 3``, ``c0 = 1 (mod 3)``;
* Type III ``[[0, k, -k], [-k, 0, k], [k+1, 1-k, 1]]``.

Type II and III normal forms come in pairs related by the half turn about a
lattice point, ``(c0, c1) ~ (2 - c0, (1 + c0)/2)`` and ``k ~ -k``, so
:func:`classify` reports the representative with positive homothety ratio
(``c0 > c1``) or positive ``k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .exact import Mat3, Vec, in_lattice_Lambda, vec
from .moduli import (
    B,
    E3,
    GroupElement,
    canonical_vec,
    canonicalize_with_element,
    group_ball_int_rows,
    group_ball_list,
    point_group_at,
    sorting_element,
    translation,
)

TYPE_I, TYPE_II, TYPE_III = "TypeI", "TypeII", "TypeIII"

# T_w = I + w 1^T translates the plane by w = (1/3, 1/3, -2/3); not in G.
W = vec(Fraction(1, 3), Fraction(1, 3), Fraction(-2, 3))
T_W = Mat3.identity() + Mat3(tuple(W[i] for i in range(3) for _ in range(3)))
T_W_INV = Mat3.identity() - Mat3(tuple(W[i] for i in range(3) for _ in range(3)))

PEDAL = Mat3.circulant(-1, 1)
ANTIPEDAL = Mat3.circulant(0, Fraction(1, 2))

SHORT_DIRECTIONS = ((1, -1, 0), (0, 1, -1), (-1, 0, 1))
LONG_DIRECTIONS = ((-2, 1, 1), (1, -2, 1), (1, 1, -2))

DEFAULT_TRIALS = 256


class FailureReason(str, Enum):
    NOT_INTEGER = "NotInteger"
    COLUMNS_NOT_SUM_ONE = "ColumnsNotSumOne"
    SINGULAR = "Singular"
    COLUMNS_NOT_IN_LATTICE = "ColumnsNotInLattice"
    EDGES_NOT_ON_REFLECTION_LINES = "EdgesNotOnReflectionLines"
    NOT_EQUILATERAL = "NotEquilateral"
    RANDOMIZED_REEXPRESSION_FAILURE = "RandomizedReexpressionFailure"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ClassificationFailure:
    reason: FailureReason
    detail: str = ""

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class Atm:
    matrix: Mat3
    kind: str
    params: Tuple[int, ...]
    witness: GroupElement
    abs_det: int
    expansion: Optional[Fraction]

    @property
    def c0(self) -> int:
        return self.params[0]

    @property
    def c1(self) -> int:
        return self.params[1]

    @property
    def k(self) -> int:
        return self.params[0]

    def label(self) -> str:
        if self.kind == TYPE_III:
            return f"{self.kind} k={self.k}"
        return f"{self.kind} c0={self.c0} c1={self.c1}"


def normal_form_matrix(kind: str, params: Sequence[int]) -> Mat3:
    if kind == TYPE_I:
        c0, c1 = params
        return Mat3.circulant(c0, c1)
    if kind == TYPE_II:
        c0, c1 = params
        return T_W_INV @ Mat3.circulant(Fraction(c0, 3), Fraction(c1, 3))
    if kind == TYPE_III:
        (k,) = params
        return Mat3.from_rows([[0, k, -k], [-k, 0, k], [k + 1, 1 - k, 1]])
    raise ValueError(f"unknown ATM kind {kind!r}")


def normal_form(a: Atm) -> Mat3:
    return normal_form_matrix(a.kind, a.params)


def expansion_of(kind: str, params: Sequence[int]) -> Optional[Fraction]:
    """Real eigenvalue of the normal form on difference vectors; None for Type III (a rotation)."""
    if kind == TYPE_I:
        return Fraction(params[0] - params[1])
    if kind == TYPE_II:
        return Fraction(params[0] - params[1], 3)
    return None


def make_atm(kind: str, params: Sequence[int], witness: Optional[GroupElement] = None) -> Atm:
    """Build an Atm directly from normal-form parameters (witness defaults to identity)."""
    params = tuple(int(p) for p in params)
    _check_params(kind, params)
    nf = normal_form_matrix(kind, params)
    g = witness or GroupElement.identity()
    m = g.inverse().matrix @ nf
    return Atm(m, kind, params, g, abs(int(nf.det())), expansion_of(kind, params))


def _check_params(kind: str, params: Tuple[int, ...]) -> None:
    if kind == TYPE_I:
        c0, c1 = params
        if c0 + 2 * c1 != 1:
            raise ValueError("Type I needs c0 + 2 c1 = 1")
    elif kind == TYPE_II:
        c0, c1 = params
        if c0 + 2 * c1 != 3 or c0 % 3 != 1 or c0 == c1:
            raise ValueError("Type II needs c0 + 2 c1 = 3, c0 = 1 mod 3, c0 != c1")
    elif kind == TYPE_III:
        if len(params) != 1 or params[0] == 0:
            raise ValueError("Type III needs a single nonzero k")
    else:
        raise ValueError(f"unknown ATM kind {kind!r}")


# ------------------------------------------------------------------ classification

def _edge_multiple(d: Vec) -> Optional[Tuple[str, int]]:
    """``("short"|"long", m)`` if ``d`` is ``m`` times one of the 12 reflection directions."""
    if any(c.denominator != 1 for c in d):
        return None
    x, y, z = (int(c) for c in d)
    if x + y + z != 0 or (x, y, z) == (0, 0, 0):
        return None
    if x == 0 or y == 0 or z == 0:
        return ("short", max(abs(x), abs(y), abs(z)))
    for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
        if a == b and c == -2 * a:
            return ("long", abs(a))
    return None


def _is_circulant_symmetric(e: Sequence) -> bool:
    """Whether the row-major entries ``e`` form ``circ(c0; c1)``."""
    return e[0] == e[4] == e[8] and e[1] == e[2] == e[3] == e[5] == e[6] == e[7]


def _int_product(g: Mat3, m: Sequence[int]) -> Tuple[int, ...]:
    """Row-major entries of ``g @ m`` for integer matrices, in plain ints."""
    a = [int(e) for e in g.entries]
    return tuple(
        a[3 * i] * m[j] + a[3 * i + 1] * m[3 + j] + a[3 * i + 2] * m[6 + j]
        for i in range(3) for j in range(3)
    )


def _int_det(m: Sequence[int]) -> int:
    return (
        m[0] * (m[4] * m[8] - m[5] * m[7])
        - m[1] * (m[3] * m[8] - m[5] * m[6])
        + m[2] * (m[3] * m[7] - m[4] * m[6])
    )


def classify(m: Mat3, trials: int = DEFAULT_TRIALS, seed: int = 0) -> Union[Atm, ClassificationFailure]:
    """Decide whether ``m`` is an ATM and bring it to normal form.

    Necessary conditions are checked in a fixed order and the first violated
    one is reported. On success ``witness @ m`` equals the normal form. The
    structural checks decide; ``trials`` randomized re-expression checks
    (0 to skip) confirm.
    """
    if not m.is_integer():
        return ClassificationFailure(FailureReason.NOT_INTEGER)
    mi = tuple(int(e) for e in m.entries)
    sums = tuple(mi[j] + mi[3 + j] + mi[6 + j] for j in range(3))
    if sums != (1, 1, 1):
        return ClassificationFailure(FailureReason.COLUMNS_NOT_SUM_ONE, f"column sums {sums}")
    d = _int_det(mi)
    if d == 0:
        return ClassificationFailure(FailureReason.SINGULAR)
    cols = tuple((mi[j], mi[3 + j], mi[6 + j]) for j in range(3))
    if not all(in_lattice_Lambda(c) for c in cols):
        return ClassificationFailure(FailureReason.COLUMNS_NOT_IN_LATTICE)

    edges = [tuple(a - b for a, b in zip(cols[i], cols[(i + 1) % 3])) for i in range(3)]
    mults = [_edge_multiple(e) for e in edges]
    if any(x is None for x in mults):
        bad = edges[mults.index(None)]
        return ClassificationFailure(
            FailureReason.EDGES_NOT_ON_REFLECTION_LINES, f"edge {tuple(map(str, bad))}"
        )
    if len(set(mults)) != 1:
        return ClassificationFailure(
            FailureReason.NOT_EQUILATERAL, "edge multiples " + ", ".join(f"{f}x{n}" for f, n in mults)
        )
    family = mults[0][0]

    mb = tuple(Fraction(sum(c[i] for c in cols), 3) for i in range(3))
    found = None
    if family == "short" and not in_lattice_Lambda(mb):
        found = _normalize_type_i(mi, mb)
    elif family == "short":
        found = _normalize_type_ii(m, mb)
    elif in_lattice_Lambda(mb):
        found = _normalize_type_iii(m, mb)
    if found is None:
        return ClassificationFailure(
            FailureReason.EDGES_NOT_ON_REFLECTION_LINES, "no group element reaches a normal form"
        )
    kind, params, witness = found

    if trials:
        bad = find_reexpression_counterexample(m, trials, seed)
        if bad is not None:
            v, g = bad
            return ClassificationFailure(
                FailureReason.RANDOMIZED_REEXPRESSION_FAILURE,
                f"v={','.join(map(str, v))} g={g.word_str()}",
            )
    return Atm(m, kind, params, witness, abs(d), expansion_of(kind, params))


def _normalize_type_i(mi: Tuple[int, ...], mb: Vec):
    shape, g0 = canonicalize_with_element(mb)
    if shape.v != B:
        return None
    y = _int_product(g0.matrix, mi)
    for q in _permutations():
        x = _int_product(q.matrix, y)
        if _is_circulant_symmetric(x):
            return TYPE_I, (x[0], x[1]), q @ g0
    return None


def _normalize_type_ii(m: Mat3, mb: Vec):
    t = translation([a - b for a, b in zip(E3, mb)])
    for h in point_group_at(E3):
        g = h @ t
        x = (T_W @ (g.matrix @ m)) * 3
        if x.is_integer() and _is_circulant_symmetric(x.entries):
            c0, c1 = int(x[0, 0]), int(x[0, 1])
            if c0 > c1 and c0 % 3 == 1:
                return TYPE_II, (c0, c1), g
    return None


def _normalize_type_iii(m: Mat3, mb: Vec):
    t = translation([a - b for a, b in zip(E3, mb)])
    for h in point_group_at(E3):
        g = h @ t
        x = g.matrix @ m
        k = int(x[0, 1])
        if k > 0 and x == normal_form_matrix(TYPE_III, (k,)):
            return TYPE_III, (k,), g
    return None


@lru_cache(maxsize=None)
def _permutations() -> Tuple[GroupElement, ...]:
    out = []
    for v in ((3, 2, 1), (3, 1, 2), (2, 3, 1), (2, 1, 3), (1, 3, 2), (1, 2, 3)):
        out.append(sorting_element(v))
    return tuple(out)


# ------------------------------------------------------------------ randomized oracle

# int64 headroom: |M| * |g| * |v numerators| stays far below 2**63 under this bound.
_NUMPY_ENTRY_BOUND = 10 ** 6


def _random_points(rng: np.random.Generator, trials: int):
    q = rng.integers(1, 101, size=trials)
    width = 6 * q + 1
    a = (rng.random(trials) * width).astype(np.int64) - 3 * q
    b = (rng.random(trials) * width).astype(np.int64) - 3 * q
    return np.stack([a, b, q - a - b], axis=1), q


def _canonical_rows(n: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Row-wise :func:`canonical_numerators` for integer points ``n / q``."""
    f = np.mod(n.T, q)
    s = f[0] + f[1] + f[2]
    f = np.where(s == 2 * q, q - f, f)
    a, b, c = f
    hi = np.maximum(np.maximum(a, b), c)
    lo = np.minimum(np.minimum(a, b), c)
    # a lattice point has f = 0 and canonicalizes to (q, 0, 0)
    return np.stack([np.where(s == 0, q, hi), a + b + c - hi - lo, lo], axis=1)


@lru_cache(maxsize=None)
def _ball6():
    ball = tuple(group_ball_list(6))
    return ball, np.array(group_ball_int_rows(6), dtype=np.int64)


def find_reexpression_counterexample(m: Mat3, trials: int, seed: int):
    """First ``(v, g)`` with ``M g v`` not a re-expression of ``M v``, or None.

    ``v`` is a random rational point of the plane (denominator at most 100,
    first two coordinates in [-3, 3]) and ``g`` a random element of the
    radius-6 group ball. Deterministic in ``seed``.
    """
    rng = np.random.default_rng(seed)
    ball, ball_rows = _ball6()
    n, q = _random_points(rng, trials)
    picks = rng.integers(0, len(ball), size=trials)
    if m.is_integer() and max(abs(e) for e in m.entries) < _NUMPY_ENTRY_BOUND:
        mi = np.array(m.int_rows(), dtype=np.int64)
        gs = ball_rows[picks]
        gn = np.matmul(gs, n[:, :, None])[:, :, 0]
        both = _canonical_rows(np.concatenate([gn, n]) @ mi.T, np.concatenate([q, q]))
        same = (both[:trials] == both[trials:]).all(axis=1)
        if same.all():
            return None
        i = int(np.argmin(same))
        return tuple(Fraction(int(c), int(q[i])) for c in n[i]), ball[int(picks[i])]
    for i in range(trials):
        v = tuple(Fraction(int(c), int(q[i])) for c in n[i])
        g = ball[int(picks[i])]
        if canonical_vec(m @ (g @ v)) != canonical_vec(m @ v):
            return v, g
    return None


def verify_reexpression_randomized(m: Mat3, trials: int = 1000, seed: int = 0) -> bool:
    return find_reexpression_counterexample(m, trials, seed) is None


# ------------------------------------------------------------------ catalogs

def catalog(max_param: int) -> List[Atm]:
    """One normal-form representative per equivalence class, parameters bounded by ``max_param``.

    Type I: ``|c1| <= max_param`` (identity included). Type II: ``|c1| <=
    max_param`` with ``c0 > c1``. Type III: ``1 <= k <= max_param``.
    """
    if max_param < 1:
        raise ValueError("max_param must be >= 1")
    out = [make_atm(TYPE_I, (1 - 2 * c1, c1)) for c1 in range(-max_param, max_param + 1)]
    for c1 in range(-max_param, max_param + 1):
        c0 = 3 - 2 * c1
        if c0 % 3 == 1 and c0 > c1:
            out.append(make_atm(TYPE_II, (c0, c1)))
    out.extend(make_atm(TYPE_III, (k,)) for k in range(1, max_param + 1))
    return out
