import random
from fractions import Fraction as F

import pytest

from trimaps.atm import (
    TYPE_I,
    TYPE_II,
    TYPE_III,
    Atm,
    ClassificationFailure,
    FailureReason,
    catalog,
    classify,
    find_reexpression_counterexample,
    make_atm,
    normal_form,
    normal_form_matrix,
    verify_reexpression_randomized,
)
from trimaps.exact import Mat3, in_lattice_Lambda
from trimaps.moduli import canonicalize, group_ball_list

PEDAL = Mat3.circulant(-1, 1)
NON_ATM = Mat3.from_rows([[2, 0, 0], [-1, 1, 0], [0, 0, 1]])


def rows(*r):
    return Mat3.from_rows(r)


def test_pedal():
    a = classify(PEDAL)
    assert isinstance(a, Atm)
    assert (a.kind, a.params, a.abs_det, a.expansion) == (TYPE_I, (-1, 1), 4, -2)
    assert a.witness.matrix == Mat3.identity()


def test_identity():
    a = classify(Mat3.identity())
    assert (a.kind, a.params, a.abs_det) == (TYPE_I, (1, 0), 1)


def test_type_iii():
    a = classify(rows([0, 1, -1], [-1, 0, 1], [2, 0, 1]))
    assert (a.kind, a.params, a.abs_det) == (TYPE_III, (1,), 3)
    assert a.expansion is None


def test_type_ii():
    m = rows([2, -1, -1], [-1, 2, -1], [0, 0, 3])
    assert normal_form_matrix(TYPE_II, (7, -2)) == m
    a = classify(m)
    assert (a.kind, a.params, a.abs_det) == (TYPE_II, (7, -2), 9)


def test_normal_forms():
    assert normal_form_matrix(TYPE_I, (-1, 1)) == PEDAL
    assert normal_form_matrix(TYPE_III, (1,)) == rows([0, 1, -1], [-1, 0, 1], [2, 0, 1])


@pytest.mark.parametrize(
    "m, reason",
    [
        (NON_ATM, FailureReason.NOT_EQUILATERAL),
        (rows([F(1, 2), 0, 0], [F(1, 2), 1, 0], [0, 0, 1]), FailureReason.NOT_INTEGER),
        (rows([1, 0, 0], [0, 1, 0], [0, 0, 2]), FailureReason.COLUMNS_NOT_SUM_ONE),
        (rows([1, 1, 1], [0, 0, 0], [0, 0, 0]), FailureReason.SINGULAR),
    ],
)
def test_failures(m, reason):
    res = classify(m)
    assert isinstance(res, ClassificationFailure)
    assert res.reason == reason
    assert not res


def test_edges_off_reflection_lines():
    # Columns are lattice points, but the first edge has direction (3, -2, -1).
    m = rows([1, -2, 0], [0, 2, 0], [0, 1, 1])
    res = classify(m)
    assert isinstance(res, ClassificationFailure)
    assert res.reason == FailureReason.EDGES_NOT_ON_REFLECTION_LINES


def test_equivalent_parameters_classify_to_one_representative():
    assert classify(normal_form_matrix(TYPE_III, (-1,))).params == (1,)
    assert classify(normal_form_matrix(TYPE_II, (-5, 4))).params == (7, -2)


def test_witness_soundness():
    rng = random.Random(1)
    ball = group_ball_list(4)
    for a in catalog(3):
        for g in rng.sample(ball, 20):
            b = classify(g.matrix @ a.matrix)
            assert isinstance(b, Atm), (a.label(), g.word_str())
            assert b.witness.matrix @ b.matrix == normal_form(b)


def test_determinant_laws():
    for a in catalog(4):
        assert abs(a.matrix.det()) == a.abs_det
        if a.kind == TYPE_I:
            assert a.abs_det == (a.c0 - a.c1) ** 2
            assert a.expansion == 1 - 3 * a.c1
        elif a.kind == TYPE_III:
            assert a.abs_det == 3 * a.k ** 2


def test_lattice_preserved():
    for a in catalog(3):
        for lam in [(1, 0, 0), (0, 1, 0), (0, 0, 1), (2, -1, 0)]:
            assert in_lattice_Lambda(a.matrix @ tuple(F(c) for c in lam))


def _on_reflection_line(v):
    x, y, z = v
    return any(c.denominator == 1 for c in (x, y, z, x - y, y - z, x - z))


def test_reflection_lines_preserved():
    rng = random.Random(2)
    for a in catalog(2):
        for _ in range(50):
            t = F(rng.randint(-200, 200), rng.randint(1, 60))
            for v in [(t, t, 1 - 2 * t), (1 - 2 * t, t, t), (t, 1 - t, F(0))]:
                assert _on_reflection_line(a.matrix @ v)


def test_catalog_contents():
    labels = {(a.kind, a.params) for a in catalog(1)}
    assert (TYPE_I, (-1, 1)) in labels
    assert (TYPE_III, (1,)) in labels
    assert (TYPE_I, (1, 0)) in labels
    for a in catalog(3):
        b = classify(normal_form(a))
        assert (b.kind, b.params) == (a.kind, a.params)


def test_make_atm_with_witness():
    g = group_ball_list(3)[40]
    a = make_atm(TYPE_I, (-3, 2), witness=g)
    assert g.matrix @ a.matrix == normal_form(a)


def test_reexpression_oracle():
    assert verify_reexpression_randomized(PEDAL, 1000, seed=0)
    assert verify_reexpression_randomized(Mat3.identity(), 50, seed=9)
    assert not verify_reexpression_randomized(NON_ATM, 1000, seed=0)
    v, g = find_reexpression_counterexample(NON_ATM, 1000, seed=0)
    assert canonicalize(NON_ATM @ (g @ v)) != canonicalize(NON_ATM @ v)


def test_oracle_is_deterministic():
    assert find_reexpression_counterexample(NON_ATM, 200, 4) == find_reexpression_counterexample(NON_ATM, 200, 4)

