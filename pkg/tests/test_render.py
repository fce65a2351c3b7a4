import math
import re
import xml.etree.ElementTree as ET
from fractions import Fraction as F

from trimaps.atm import TYPE_I, TYPE_III, make_atm
from trimaps.dynamics import PEDAL_ATM, orbit
from trimaps.moduli import B, E1, E2, E3, CanonicalShape
from trimaps.render import fmt, project, render_image, render_orbit, render_partition

SVG = "{http://www.w3.org/2000/svg}"
NUM = re.compile(r"-?\d+\.\d+")


def _polygons(svg, cls):
    root = ET.fromstring(svg.split("\n", 1)[1])
    return [p for p in root.iter(SVG + "polygon") if p.get("class") == cls]


def _points(poly):
    return [tuple(float(x) for x in pair.split(",")) for pair in poly.get("points").split()]


def _side(pts):
    return math.dist(pts[0], pts[1])


def test_projection_is_isometric():
    assert project(B) == (0.0, 0.0)
    d12 = math.dist(project(E1), project(E2))
    d23 = math.dist(project(E2), project(E3))
    assert math.isclose(d12, math.sqrt(2)) and math.isclose(d23, math.sqrt(2))


def test_fmt():
    assert fmt(1 / 3) == "0.333333"
    assert fmt(-1e-9) == "0.000000"


def test_partition_svg_structure():
    svg = render_partition(PEDAL_ATM)
    cells = _polygons(svg, "cell")
    assert [c.get("id") for c in cells] == [f"cell-{i}" for i in range(4)]
    assert len({c.get("fill") for c in cells}) == 4
    assert svg.count("<polygon") == 4
    assert svg == render_partition(PEDAL_ATM)


def test_coordinates_have_six_decimals():
    svg = render_partition(make_atm(TYPE_I, (-3, 2)))
    for attr in re.findall(r'points="([^"]+)"', svg):
        for num in NUM.findall(attr):
            assert len(num.split(".")[1]) == 6


def test_identity_image_is_the_simplex():
    svg = render_image(make_atm(TYPE_I, (1, 0)))
    (img,) = _polygons(svg, "image")
    assert len(_points(img)) == 3
    assert 'class="simplex"' in svg


def test_N_image_is_five_times_larger():
    svg = render_image(make_atm(TYPE_I, (-3, 2)))
    pts = _points(_polygons(svg, "image")[0])
    simplex = re.search(r'class="simplex" d="M ([^"]+) Z"', svg).group(1)
    sp = [tuple(float(x) for x in s.split()) for s in simplex.split(" L ")]
    assert math.isclose(_side(pts) / _side(sp), 5, rel_tol=1e-5)


def test_type_iii_image():
    svg = render_image(make_atm(TYPE_III, (1,)))
    pts = _points(_polygons(svg, "image")[0])
    sides = [math.dist(pts[i], pts[(i + 1) % 3]) for i in range(3)]
    assert max(sides) - min(sides) < 1e-4


def test_orbit_svg():
    r = orbit(PEDAL_ATM, CanonicalShape.of(F(3, 7), F(2, 7), F(2, 7)))
    svg = render_orbit(PEDAL_ATM, r)
    assert svg.count("<circle") == 3
    assert 'class="orbit"' in svg
