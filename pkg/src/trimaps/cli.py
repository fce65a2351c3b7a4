"""Command-line interface.

Exit codes: 0 success, 1 domain failure (not an ATM, no decomposition,
orbit bound exceeded), 2 malformed input, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

from .atm import DEFAULT_TRIALS, TYPE_I, Atm, ClassificationFailure, classify
from .dynamics import NoCycleWithinBound, orbit
from .exact import CoincidentVertices, Mat3, shape_from_vertices
from .hofstadter import FactorOutOfRange, ZeroDenominator, decompose
from .markov import MarkovPartition, build_partition, itinerary, symbol_statistics
from .moduli import CanonicalShape, NotOnPlaneA, canonicalize, fmt_vec, point_group_order
from .render import MODES, render_image, render_orbit, render_partition

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_PARSE = 2
EXIT_IO = 3


class InputError(ValueError):
    """Malformed command-line input (exit code 2)."""


class DomainError(RuntimeError):
    """Well-formed input the mathematics rejects (exit code 1)."""


# ------------------------------------------------------------------ parsing

def parse_number(text: str, bound: int) -> Fraction:
    try:
        x = Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f"not a rational number: {text!r}") from e
    if "." in text or "e" in text.lower():
        x = x.limit_denominator(bound)
    return x


def parse_shape(text: str, bound: int = 1000) -> tuple:
    parts = text.split(",")
    if len(parts) != 3:
        raise InputError(f"shape needs three comma-separated entries, got {text!r}")
    return tuple(parse_number(p, bound) for p in parts)


def _matrix_from_json(doc) -> Mat3:
    rows = doc.get("matrix") if isinstance(doc, dict) else doc
    if not (isinstance(rows, list) and len(rows) == 3 and all(isinstance(r, list) and len(r) == 3 for r in rows)):
        raise InputError('expected a document with "matrix": [[..],[..],[..]]')
    if not all(isinstance(x, int) and not isinstance(x, bool) for r in rows for x in r):
        raise InputError("matrix entries must be integers")
    return Mat3.from_rows(rows)


def parse_matrix(tokens: Sequence[str]) -> Mat3:
    """Nine integers (whitespace or commas), a JSON document, or a path to either."""
    text = " ".join(tokens).strip()
    if len(tokens) == 1 and os.path.isfile(tokens[0]):
        try:
            with open(tokens[0], encoding="utf-8") as fh:
                text = fh.read().strip()
        except OSError as e:
            raise InputError(f"cannot read {tokens[0]}: {e}") from e
    if text.startswith("{") or text.startswith("[["):
        try:
            return _matrix_from_json(json.loads(text))
        except json.JSONDecodeError as e:
            raise InputError(f"bad matrix document: {e}") from e
    items = text.replace(",", " ").split()
    if len(items) != 9:
        raise InputError(f"matrix needs nine integers, got {len(items)}")
    try:
        vals = [int(x) for x in items]
    except ValueError as e:
        raise InputError(f"matrix entries must be integers: {e}") from e
    return Mat3.from_rows([vals[0:3], vals[3:6], vals[6:9]])


def parse_point(text: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise InputError(f"vertex needs two comma-separated coordinates, got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError as e:
        raise InputError(f"bad vertex {text!r}") from e


def fmt_matrix(m: Mat3) -> str:
    return " ".join(str(x) for x in m.entries)


def _atm(args) -> Atm:
    m = parse_matrix(args.matrix)
    res = classify(m, trials=args.trials, seed=args.seed)
    if isinstance(res, ClassificationFailure):
        raise DomainError(f"{res.reason}: {res.detail}" if res.detail else str(res.reason))
    return res


def _shape_arg(args, text: str) -> CanonicalShape:
    v = parse_shape(text, args.denominator_bound)
    try:
        return canonicalize(v)
    except NotOnPlaneA as e:
        raise InputError("not on plane A") from e


def _partition(a: Atm) -> MarkovPartition:
    return build_partition(a)


# ------------------------------------------------------------------ commands

def cmd_canon(args, out) -> int:
    v = parse_shape(args.shape, args.denominator_bound)
    try:
        p = canonicalize(v)
    except NotOnPlaneA as e:
        raise InputError("not on plane A") from e
    print(f"{p} pointgroup={point_group_order(p)}", file=out)
    return EXIT_OK


def cmd_vertices(args, out) -> int:
    pts = [parse_point(t) for t in args.vertices]
    try:
        s = shape_from_vertices(*pts, max_denominator=args.denominator_bound)
    except CoincidentVertices as e:
        raise DomainError(str(e)) from e
    p = canonicalize(s.snapped)
    print(f"angles={fmt_vec(s.snapped)} canonical={p} flat={str(s.flat).lower()}", file=out)
    return EXIT_OK


def cmd_classify(args, out) -> int:
    a = _atm(args)
    line = f"{a.label()} |det|={a.abs_det}"
    if a.expansion is not None:
        line += f" expansion={a.expansion}"
    print(line, file=out)
    print(f"witness={a.witness.word_str()}", file=out)
    return EXIT_OK


def cmd_orbit(args, out) -> int:
    a = _atm(args)
    p = _shape_arg(args, args.shape)
    try:
        rec = orbit(a, p, max_steps=args.max_steps)
    except NoCycleWithinBound as e:
        raise DomainError(str(e)) from e
    for i, s in enumerate(rec.iterates()):
        print(f"{i} {s}", file=out)
    print(
        f"preperiod={rec.preperiod} period={rec.period} "
        f"flat={str(rec.hit_flat).lower()} right={str(rec.hit_right).lower()}",
        file=out,
    )
    return EXIT_OK


def partition_document(mp: MarkovPartition) -> dict:
    return {
        "atm": mp.atm.label(),
        "matrix": [[str(x) for x in row] for row in mp.atm.matrix.rows()],
        "cells": [
            {
                "index": c.index,
                "vertices": [fmt_vec(v) for v in c.polygon],
                "unfold": c.unfold.word_str(),
            }
            for c in mp.cells
        ],
    }


def partition_text(mp: MarkovPartition) -> str:
    lines = [f"cells={len(mp.cells)}"]
    for c in mp.cells:
        lines.append(f"cell {c.index}")
        lines.append("  vertices " + " ".join(fmt_vec(v) for v in c.polygon))
        lines.append(f"  unfold {c.unfold.word_str()}")
    return "\n".join(lines) + "\n"


def cmd_partition(args, out) -> int:
    mp = _partition(_atm(args))
    if args.format == "json":
        text = json.dumps(partition_document(mp), indent=2) + "\n"
    else:
        text = partition_text(mp)
    return _emit(text, args.out, out)


def cmd_itinerary(args, out) -> int:
    a = _atm(args)
    mp = _partition(a)
    for text in args.shape:
        it = itinerary(mp, _shape_arg(args, text), args.length)
        line = it.word()
        if it.boundary_steps:
            line += "\tboundary=" + ",".join(str(i) for i in sorted(it.boundary_steps))
        print(line, file=out)
    return EXIT_OK


def cmd_decompose(args, out) -> int:
    a = _atm(args)
    if a.kind != TYPE_I:
        raise DomainError(f"decomposition is only available for {TYPE_I}, not {a.kind}")
    try:
        d = decompose(a)
    except (FactorOutOfRange, ZeroDenominator, ValueError) as e:
        raise DomainError(str(e)) from e
    print(f"r={fmt_vec(d.r)} antipedal={str(d.uses_antipedal).lower()}", file=out)
    names = ["H_A", "H_B", "H_C"] if len(d.factors) > 1 else []
    if d.uses_antipedal:
        names.append("P^-1")
    for name, f in zip(names, d.factors):
        print(f"{name} {fmt_matrix(f)}", file=out)
    return EXIT_OK


def cmd_stats(args, out) -> int:
    a = _atm(args)
    mp = _partition(a)
    st = symbol_statistics(mp, args.points, args.length, seed=args.seed, workers=args.workers)
    print(f"symbols={st.symbols} length={st.length} kept={st.kept} discarded={st.discarded}", file=out)
    for s, z in enumerate(st.single_z()):
        print(f"single {s} freq={st.single_frequency(s):.6f} z={z:+.3f}", file=out)
    for (s, t), z in sorted(st.pair_z().items()):
        print(f"pair {s},{t} freq={st.pair_frequency(s, t):.6f} z={z:+.3f}", file=out)
    return EXIT_OK


def render_svg(a: Atm, mode: str, shape: Optional[CanonicalShape] = None, max_steps: Optional[int] = None) -> str:
    if mode == "image":
        return render_image(a)
    if mode == "partition":
        return render_partition(a)
    if shape is None:
        raise InputError("orbit mode needs --shape")
    rec = orbit(a, shape, max_steps=max_steps)
    return render_orbit(a, rec)


def cmd_render(args, out) -> int:
    a = _atm(args)
    shape = _shape_arg(args, args.shape) if args.shape else None
    try:
        svg = render_svg(a, args.mode, shape, args.max_steps)
    except NoCycleWithinBound as e:
        raise DomainError(str(e)) from e
    return _emit(svg, args.out, out)


def _emit(text: str, path: Optional[str], out) -> int:
    if not path or path == "-":
        out.write(text)
        return EXIT_OK
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as e:
        print(f"error: cannot write {path}: {e.strerror or e}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


# ------------------------------------------------------------------ argparse

def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _positive(text: str) -> int:
    v = _nonneg(text)
    if v == 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


class _Parser(argparse.ArgumentParser):
    """Treats any token starting with ``-<digit>`` as a value, so "-1/5,3/5,3/5" parses."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = re.compile(r"^-\d")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_nonneg, default=0, help="random seed (default 0)")
    common.add_argument(
        "--denominator-bound", type=_positive, default=1000,
        help="largest denominator when snapping decimal input (default 1000)",
    )

    matrix = argparse.ArgumentParser(add_help=False)
    matrix.add_argument("matrix", nargs="+", help="nine integers row-major, a JSON document, or a file")
    matrix.add_argument(
        "--trials", type=_nonneg, default=DEFAULT_TRIALS,
        help="randomized re-expression checks during classification",
    )

    parser = _Parser(prog="trimaps", description="Linear triangle maps on shape space.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("canon", parents=[common], help="canonical representative of a shape")
    p.add_argument("shape", help='angles as "a/b,c/d,e/f"')
    p.set_defaults(func=cmd_canon)

    p = sub.add_parser("vertices", parents=[common], help="shape of a triangle given by vertices")
    p.add_argument("vertices", nargs=3, metavar="X,Y")
    p.set_defaults(func=cmd_vertices)

    p = sub.add_parser("classify", parents=[common, matrix], help="classify an angle transition matrix")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("orbit", parents=[common, matrix], help="orbit of a shape")
    p.add_argument("--shape", required=True)
    p.add_argument("--max-steps", type=_positive, default=None)
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("partition", parents=[common, matrix], help="Markov partition of D")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("itinerary", parents=[common, matrix], help="symbolic itineraries")
    p.add_argument("--shape", action="append", required=True, help="may be repeated")
    p.add_argument("--length", type=_positive, default=20)
    p.set_defaults(func=cmd_itinerary)

    p = sub.add_parser("decompose", parents=[common, matrix], help="Hofstadter factorization")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("stats", parents=[common, matrix], help="symbol frequencies of random orbits")
    p.add_argument("--points", type=_positive, default=2000)
    p.add_argument("--length", type=_positive, default=50)
    p.add_argument("--workers", type=_positive, default=1)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("render", parents=[common, matrix], help="SVG figure")
    p.add_argument("--mode", choices=MODES, default="image")
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.add_argument("--shape", default=None, help="start shape for orbit mode")
    p.add_argument("--max-steps", type=_positive, default=None)
    p.set_defaults(func=cmd_render)
    return parser


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
