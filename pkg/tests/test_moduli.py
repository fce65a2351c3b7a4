import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import d_points, plane_points
from trimaps.exact import Mat3
from trimaps.moduli import (
    B,
    GENERATOR_LABELS,
    INVOLUTIONS,
    GroupElement,
    LimitExceeded,
    NotOnPlaneA,
    UnknownGenerator,
    brute_force_canonical,
    canonicalize,
    canonicalize_with_element,
    enumerate_group_ball,
    generator,
    group_ball_list,
    in_D,
    is_equivalent,
    point_group_at,
    point_group_order,
)


def test_generator_matrices():
    assert generator("Ra").matrix == Mat3.from_rows([[-1, 0, 0], [1, 0, 1], [1, 1, 0]])
    assert generator("P12").matrix == Mat3.from_rows([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    assert generator("Tx") @ B == (F(4, 3), F(-2, 3), F(1, 3))
    with pytest.raises(UnknownGenerator):
        generator("Q")


def test_generators_preserve_plane_and_lattice():
    for label in GENERATOR_LABELS:
        m = generator(label).matrix
        assert m.is_integer()
        assert all(s == 1 for s in m.column_sums())
        assert abs(m.det()) == 1


def test_involutions():
    for label in INVOLUTIONS:
        g = generator(label)
        assert (g @ g).matrix == Mat3.identity()


def test_translation_generators():
    rng = random.Random(5)
    tx, ty = generator("Tx"), generator("Ty")
    assert tx.matrix == (generator("Rb") @ generator("Ra")).matrix
    assert ty.matrix == (generator("Rc") @ generator("Rb")).matrix
    for _ in range(100):
        x, y = F(rng.randint(-50, 50), rng.randint(1, 20)), F(rng.randint(-50, 50), rng.randint(1, 20))
        v = (x, y, 1 - x - y)
        assert tx @ v == (x + 1, y - 1, 1 - x - y)
        assert ty @ v == (x, y + 1, -x - y)


def test_in_D():
    assert in_D((F(1, 2), F(1, 3), F(1, 6)))
    assert in_D(B)
    assert not in_D((F(1, 4), F(1, 2), F(1, 4)))
    with pytest.raises(NotOnPlaneA):
        in_D((1, 1, 1))


def test_canonicalize_examples():
    assert canonicalize((F(-1, 5), F(3, 5), F(3, 5))).v == (F(2, 5), F(2, 5), F(1, 5))
    assert canonicalize(B).v == B
    assert canonicalize((5, -4, 0)).v == (1, 0, 0)
    with pytest.raises(NotOnPlaneA):
        canonicalize((F(1, 2), F(1, 2), F(1, 2)))


def test_canonical_example_reached_by_short_word():
    # Independent of the fractional-part algorithm: search generator words.
    assert brute_force_canonical((F(-1, 5), F(3, 5), F(3, 5)), 8) == [(F(2, 5), F(2, 5), F(1, 5))]


def test_is_equivalent():
    assert is_equivalent((F(1, 2), F(1, 4), F(1, 4)), (F(1, 4), F(1, 2), F(1, 4)))
    assert is_equivalent((F(-1, 5), F(3, 5), F(3, 5)), (F(2, 5), F(2, 5), F(1, 5)))
    assert not is_equivalent((F(1, 2), F(1, 4), F(1, 4)), B)


def test_point_group_orders():
    assert point_group_order((1, 0, 0)) == 12
    assert point_group_order((F(1, 2), F(1, 2), 0)) == 4
    assert point_group_order(B) == 6
    assert point_group_order((F(1, 2), F(1, 3), F(1, 6))) == 1
    assert point_group_order((F(2, 5), F(2, 5), F(1, 5))) == 2
    assert point_group_order((F(3, 4), F(1, 4), 0)) == 2


@pytest.mark.parametrize("p", [(1, 0, 0), (F(1, 2), F(1, 2), 0), B, (F(3, 5), F(1, 5), F(1, 5)), (F(1, 2), F(1, 3), F(1, 6))])
def test_point_group_order_matches_stabilizer(p):
    p = tuple(F(c) for c in p)
    stab = [g for g in enumerate_group_ball(6) if g @ p == p]
    assert len(stab) == point_group_order(p)


def test_point_group_at_lattice_points():
    for p in [(1, 0, 0), (0, 0, 1), (2, -3, 2)]:
        p = tuple(F(c) for c in p)
        h = point_group_at(p)
        assert len(set(h)) == 12
        assert all(g @ p == p for g in h)


def test_group_ball_sizes():
    assert enumerate_group_ball(0) == frozenset({GroupElement.identity()})
    assert len(enumerate_group_ball(1)) == 10
    assert [len(enumerate_group_ball(n)) for n in range(2, 6)] == [53, 153, 317, 551]
    with pytest.raises(LimitExceeded):
        enumerate_group_ball(13)


def test_group_elements_are_sound():
    for g in group_ball_list(4):
        assert g.matrix == GroupElement.from_word(g.word).matrix
        assert all(s == 1 for s in g.matrix.column_sums())
        assert abs(g.matrix.det()) == 1


@settings(max_examples=300)
@given(plane_points())
def test_canonicalize_idempotent(v):
    p = canonicalize(v)
    assert canonicalize(p.v) == p
    assert in_D(p.v)


@settings(max_examples=100)
@given(plane_points(), st.integers(0, len(group_ball_list(6)) - 1))
def test_canonicalize_is_G_invariant(v, i):
    g = group_ball_list(6)[i]
    assert canonicalize(g @ v) == canonicalize(v)


def test_canonicalize_G_invariant_sampled():
    rng = random.Random(0)
    ball = group_ball_list(6)
    for _ in range(1000):
        q = rng.randint(1, 100)
        x, y = F(rng.randint(-3 * q, 3 * q), q), F(rng.randint(-3 * q, 3 * q), q)
        v = (x, y, 1 - x - y)
        assert canonicalize(rng.choice(ball) @ v) == canonicalize(v)


@settings(max_examples=300)
@given(plane_points())
def test_witness_element_maps_into_D(v):
    p, g = canonicalize_with_element(v)
    assert g @ v == p.v
    assert g.matrix == GroupElement.from_word(g.word).matrix


@settings(max_examples=200)
@given(d_points(), st.integers(0, len(group_ball_list(5)) - 1))
def test_point_group_order_conjugation_invariant(p, i):
    g = group_ball_list(5)[i]
    assert point_group_order(canonicalize(g @ p)) == point_group_order(p)


def test_orbit_meets_D_once():
    rng = random.Random(3)
    for _ in range(30):
        q = rng.randint(7, 40)
        x, y = F(rng.randint(-q, 2 * q), q), F(rng.randint(-q, 2 * q), q)
        found = brute_force_canonical((x, y, 1 - x - y), 8)
        assert len(found) <= 1
