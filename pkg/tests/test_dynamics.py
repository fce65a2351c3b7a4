import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from conftest import d_points
from trimaps.atm import TYPE_I, TYPE_III, catalog, make_atm
from trimaps.dynamics import (
    PEDAL_ATM,
    DegenerateRight,
    NoCycleWithinBound,
    antipedal_step,
    hobson_pedal_step,
    is_flat,
    orbit,
    orbit_bound,
    preimages,
    step,
)
from trimaps.markov import build_partition, locate
from trimaps.moduli import CanonicalShape

S = CanonicalShape.of
IDENTITY = make_atm(TYPE_I, (1, 0))
EQUILATERAL = S(F(1, 3), F(1, 3), F(1, 3))


def test_step_examples():
    assert step(PEDAL_ATM, S(F(3, 5), F(1, 5), F(1, 5))) == S(F(2, 5), F(2, 5), F(1, 5))
    assert step(PEDAL_ATM, EQUILATERAL) == EQUILATERAL
    p = S(F(1, 2), F(1, 3), F(1, 6))
    assert step(IDENTITY, p) == p


def test_hobson_examples():
    assert hobson_pedal_step(S(F(2, 5), F(7, 20), F(1, 4))) == S(F(1, 2), F(3, 10), F(1, 5))
    assert hobson_pedal_step(S(F(3, 5), F(1, 5), F(1, 5))) == S(F(2, 5), F(2, 5), F(1, 5))
    assert isinstance(hobson_pedal_step(S(F(1, 2), F(1, 4), F(1, 4))), DegenerateRight)


@settings(max_examples=300)
@given(d_points(max_den=97))
def test_hobson_agrees_with_linear_step(p):
    if 0 in p or F(1, 2) in p:
        return
    assert hobson_pedal_step(p) == step(PEDAL_ATM, p)


def test_antipedal_examples():
    assert antipedal_step(S(1, 0, 0)) == S(F(1, 2), F(1, 2), 0)
    assert antipedal_step(EQUILATERAL) == EQUILATERAL
    p = S(F(2, 5), F(2, 5), F(1, 5))
    assert step(PEDAL_ATM, antipedal_step(p)) == p


@settings(max_examples=300)
@given(d_points())
def test_antipedal_is_acute_ancestor(p):
    a = antipedal_step(p)
    assert a.v[0] <= F(1, 2)
    assert step(PEDAL_ATM, a) == S(*p)


@settings(max_examples=200)
@given(d_points())
def test_flat_shapes_stay_flat(p):
    if p[2] != 0:
        return
    assert is_flat(step(PEDAL_ATM, p))


def test_preimages_of_equilateral():
    pre = preimages(PEDAL_ATM, EQUILATERAL)
    assert pre == {EQUILATERAL, S(F(2, 3), F(1, 6), F(1, 6))}
    assert all(step(PEDAL_ATM, q) == EQUILATERAL for q in pre)


def test_preimages_identity():
    p = S(F(1, 2), F(1, 3), F(1, 6))
    assert preimages(IDENTITY, p) == {p}


def test_generic_preimages_of_pedal():
    p = S(F(11, 23), F(7, 23), F(5, 23))
    pre = preimages(PEDAL_ATM, p)
    assert len(pre) == 4
    assert sum(1 for q in pre if q.v[0] < F(1, 2)) == 1
    assert all(step(PEDAL_ATM, q) == p for q in pre)


@pytest.mark.parametrize("a", [PEDAL_ATM, make_atm(TYPE_I, (-3, 2)), make_atm(TYPE_III, (1,))], ids=str)
def test_preimage_count_in_cell_interiors(a):
    mp = build_partition(a)
    for cell in mp.cells:
        centre = tuple(sum(v[i] for v in cell.polygon) / 3 for i in range(3))
        target = step(a, centre)
        assert locate(mp, centre) == (cell.index, False)
        pre = preimages(a, target, mp)
        assert len(pre) == a.abs_det
        assert all(step(a, q) == target for q in pre)


def test_orbit_examples():
    r = orbit(PEDAL_ATM, S(F(3, 7), F(2, 7), F(2, 7)))
    assert (r.preperiod, r.period) == (0, 3)
    assert r.cycle == (S(F(3, 7), F(2, 7), F(2, 7)), S(F(3, 7), F(3, 7), F(1, 7)), S(F(5, 7), F(1, 7), F(1, 7)))
    assert not r.hit_flat and not r.hit_right

    r = orbit(PEDAL_ATM, S(F(1, 2), F(1, 4), F(1, 4)))
    assert r.cycle == (S(1, 0, 0),)
    assert (r.preperiod, r.period, r.hit_flat, r.hit_right) == (2, 1, True, True)

    r = orbit(PEDAL_ATM, EQUILATERAL)
    assert (r.preperiod, r.period) == (0, 1)


def test_orbit_bound_guard():
    with pytest.raises(NoCycleWithinBound):
        orbit(PEDAL_ATM, S(F(3, 7), F(2, 7), F(2, 7)), max_steps=2)
    with pytest.raises(ValueError):
        orbit(PEDAL_ATM, EQUILATERAL, max_steps=0)


def test_orbit_invariants():
    rng = random.Random(11)
    atms = catalog(2)
    for _ in range(200):
        a = rng.choice(atms)
        q = rng.randint(2, 60)
        c = rng.randint(0, q // 3)
        b = rng.randint(c, (q - c) // 2)
        p = S(F(q - b - c, q), F(b, q), F(c, q))
        r = orbit(a, p)
        assert r.preperiod + r.period <= orbit_bound(q)
        x = p
        for _ in range(r.preperiod):
            x = step(a, x)
        assert x == r.cycle[0]
        for i, c in enumerate(r.cycle):
            assert step(a, c) == r.cycle[(i + 1) % r.period]
            assert all(v.denominator <= q and q % v.denominator == 0 for v in c.v)
        assert len(set(r.cycle)) == r.period


def test_orbit_accepts_plain_matrix():
    r = orbit(PEDAL_ATM.matrix, (F(3, 7), F(2, 7), F(2, 7)))
    assert r.period == 3
