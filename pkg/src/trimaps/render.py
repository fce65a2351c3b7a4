"""SVG figures of the angle plane.

Points of A are mapped to the page by the isometry

    u1 = (e1 - e2) / sqrt(2),   u2 = (e1 + e2 - 2 e3) / sqrt(6)

with the barycenter ``b`` at the origin. All geometry stays exact until the
final projection, and every coordinate is written with six decimals, so the
output is a pure function of the inputs.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple
from xml.sax.saxutils import escape

from .atm import Atm
from .exact import Vec
from .markov import MarkovPartition, _hexagon, build_partition
from .dynamics import OrbitRecord
from .moduli import B, D_VERTICES, E1, E2, E3

MODES = ("image", "partition", "orbit")

PALETTE = (
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948",
    "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac", "#86bcb6", "#d4a6c8",
)

WIDTH = 600.0
PAD = 20.0

_S2 = math.sqrt(2.0)
_S6 = math.sqrt(6.0)


def project(v: Sequence[Fraction]) -> Tuple[float, float]:
    d = [float(v[i] - B[i]) for i in range(3)]
    return (d[0] - d[1]) / _S2, (d[0] + d[1] - 2 * d[2]) / _S6


def fmt(x: float) -> str:
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


class _Page:
    """Maps projected points into a fixed-width viewport with y pointing up."""

    def __init__(self, points: Iterable[Tuple[float, float]]):
        pts = list(points)
        self.x0 = min(p[0] for p in pts)
        self.y1 = max(p[1] for p in pts)
        w = max(p[0] for p in pts) - self.x0
        h = self.y1 - min(p[1] for p in pts)
        self.scale = (WIDTH - 2 * PAD) / max(w, h, 1e-12)
        self.width = WIDTH
        self.height = h * self.scale + 2 * PAD

    def xy(self, v: Sequence[Fraction]) -> Tuple[float, float]:
        x, y = project(v)
        return PAD + (x - self.x0) * self.scale, PAD + (self.y1 - y) * self.scale

    def points_attr(self, poly: Sequence[Sequence[Fraction]]) -> str:
        return " ".join(f"{fmt(x)},{fmt(y)}" for x, y in (self.xy(v) for v in poly))

    def path_d(self, poly: Sequence[Sequence[Fraction]], closed: bool = True) -> str:
        pts = [self.xy(v) for v in poly]
        d = "M " + " L ".join(f"{fmt(x)} {fmt(y)}" for x, y in pts)
        return d + " Z" if closed else d


def _document(page: _Page, title: str, body: List[str]) -> str:
    head = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{fmt(page.width)}" height="{fmt(page.height)}" '
        f'viewBox="0 0 {fmt(page.width)} {fmt(page.height)}">',
        f"<title>{escape(title)}</title>",
        f'<rect x="0" y="0" width="{fmt(page.width)}" height="{fmt(page.height)}" fill="#ffffff"/>',
    ]
    return "\n".join(head + body + ["</svg>"]) + "\n"


def _unproject(x: float, y: float) -> Tuple[float, float, float]:
    a, c = x / _S2, y / _S6
    third = 1.0 / 3.0
    return third + a + c, third - a + c, third - 2 * c


def _tiles_covering(page: _Page) -> List[Tuple[Vec, Vec, Vec]]:
    """Copies of D meeting the page rectangle (whole tiles; the page clips them)."""
    xs = (page.x0, page.x0 + (page.width - 2 * PAD) / page.scale)
    ys = (page.y1, page.y1 - (page.height - 2 * PAD) / page.scale)
    corners = [_unproject(x, y) for x in xs for y in ys]
    a_vals = [c[0] - 1 for c in corners]
    b_vals = [-c[2] for c in corners]
    out = []
    for ta in range(math.floor(min(a_vals)) - 1, math.ceil(max(a_vals)) + 2):
        for tb in range(math.floor(min(b_vals)) - 1, math.ceil(max(b_vals)) + 2):
            shift = (ta, tb - ta, -tb)
            for _, tile in _hexagon():
                moved = tuple(tuple(v[i] + shift[i] for i in range(3)) for v in tile)
                pts = [page.xy(v) for v in moved]
                if (
                    max(p[0] for p in pts) < 0 or min(p[0] for p in pts) > page.width
                    or max(p[1] for p in pts) < 0 or min(p[1] for p in pts) > page.height
                ):
                    continue
                out.append(moved)
    return out


def render_image(a: Atm) -> str:
    """``M A_p`` shaded over the tiling of A by copies of D."""
    simplex = (E1, E2, E3)
    image = tuple(a.matrix @ v for v in simplex)
    page = _Page(project(v) for v in simplex + image)
    body = [
        '<clipPath id="page"><rect x="0" y="0" '
        f'width="{fmt(page.width)}" height="{fmt(page.height)}"/></clipPath>',
        '<g class="tiling" clip-path="url(#page)" fill="none" stroke="#c8c8c8" stroke-width="0.5">',
    ]
    for tile in _tiles_covering(page):
        body.append(f'<path d="{page.path_d(tile)}"/>')
    body.append("</g>")
    body.append(
        f'<polygon class="image" points="{page.points_attr(image)}" '
        'fill="#3b6fd4" fill-opacity="0.35" stroke="#1f3f8f" stroke-width="1.5"/>'
    )
    body.append(
        f'<path class="simplex" d="{page.path_d(simplex)}" fill="none" stroke="#000000" stroke-width="1.5"/>'
    )
    body.append(
        f'<path class="domain" d="{page.path_d(D_VERTICES)}" fill="#999999" fill-opacity="0.4" stroke="none"/>'
    )
    return _document(page, f"image of the simplex under {a.label()}", body)


def render_partition(a: Atm, mp: Optional[MarkovPartition] = None) -> str:
    """The cells of D coloured by symbol, one ``polygon`` element per cell."""
    mp = mp or build_partition(a)
    page = _Page(project(v) for v in D_VERTICES)
    font = max(6.0, min(18.0, 120.0 / math.sqrt(len(mp.cells))))
    body = ['<g class="partition" stroke="#000000" stroke-width="0.75">']
    for cell in mp.cells:
        colour = PALETTE[cell.index % len(PALETTE)]
        body.append(
            f'<polygon class="cell" id="cell-{cell.index}" points="{page.points_attr(cell.polygon)}" fill="{colour}"/>'
        )
    body.append("</g>")
    body.append(f'<g class="labels" font-family="sans-serif" font-size="{fmt(font)}" text-anchor="middle">')
    for cell in mp.cells:
        centre = tuple(sum(v[i] for v in cell.polygon) / 3 for i in range(3))
        x, y = page.xy(centre)
        body.append(f'<text x="{fmt(x)}" y="{fmt(y + font / 3)}">{cell.index}</text>')
    body.append("</g>")
    body.append(
        f'<path class="domain" d="{page.path_d(D_VERTICES)}" fill="none" stroke="#000000" stroke-width="2"/>'
    )
    return _document(page, f"Markov partition of {a.label()}", body)


def render_orbit(a: Atm, record: OrbitRecord) -> str:
    """An orbit drawn as a path through its iterates in D, returning to the start of the cycle."""
    page = _Page(project(v) for v in D_VERTICES)
    body = [
        f'<path class="domain" d="{page.path_d(D_VERTICES)}" fill="#f4f4f4" stroke="#000000" stroke-width="1.5"/>'
    ]
    vs = [p.v for p in record.iterates()]
    path = vs + [record.cycle[0].v]
    if len(vs) > 1:
        body.append(
            f'<path class="orbit" d="{page.path_d(path, closed=False)}" fill="none" stroke="#d62728" stroke-width="1"/>'
        )
    body.append('<g class="iterates" fill="#d62728">')
    for i, v in enumerate(vs):
        x, y = page.xy(v)
        body.append(f'<circle id="iterate-{i}" cx="{fmt(x)}" cy="{fmt(y)}" r="3"/>')
    body.append("</g>")
    return _document(page, f"orbit under {a.label()}", body)
