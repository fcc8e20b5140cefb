"""Command-line front end.

Inputs are JSON files; ``fixture:NAME`` selects a pinned input instead
(nodal, quartic-node, six-square, six-generic, v1).  Point streams are
JSON-lines terminated by one {"report": ...} line.
"""
from __future__ import annotations

import argparse
import io
import json
import logging
import os
import sys
from collections import Counter
from typing import Optional

from . import fixtures
from .arith import Poly2, q_from_str, q_to_str
from .elliptic import DEFAULT_HEIGHT_CAP_BITS, EllipticError
from .fano_v1 import FanoError, V1Model, disc_locus, tangent_section_at, v1_generate
from .fibration import (
    DoubleCoverSurface, FibrationError, build_fibration, default_provenance, find_multisections,
    generate_points,
)
from .plane_curves import (
    CurveError, DegeneracyReport, PlaneCurve, ProjLine, classify_singularity, point_to_json,
    singular_points, six_lines_analysis,
)
from .six_lines import six_lines_generate

log = logging.getLogger("ellsurf")

EXIT_OK, EXIT_FAIL, EXIT_SCHEMA, EXIT_DEGENERATE, EXIT_OVERFLOW = 0, 1, 2, 3, 4


class SchemaError(ValueError):
    pass


# --------------------------------------------------------------------------
# input

def _load(path: str):
    if path.startswith("fixture:"):
        return _fixture(path.split(":", 1)[1])
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc


def _fixture(name: str):
    if name == "nodal":
        return {"curve": fixtures.NODAL_SEXTIC.to_json(),
                "base_point": point_to_json(fixtures.NODAL_BASE_POINT)}
    if name == "quartic-node":
        return {"curve": fixtures.QUARTIC_NODE_SEXTIC.to_json(), "base_point": ["0/1", "0/1"]}
    if name in ("six-square", "six-generic"):
        return [l.to_json() for l in fixtures.six_lines(name.split("-")[1])]
    if name == "v1":
        out = fixtures.v1_model().to_json()
        out["point"] = [q_to_str(v) for v in fixtures.v1_point()]
        return out
    raise SchemaError(f"unknown fixture {name!r}")


def _curve_of(data) -> PlaneCurve:
    raw = data["curve"] if isinstance(data, dict) else data
    try:
        return PlaneCurve.from_json(raw)
    except (ValueError, TypeError, KeyError) as exc:
        raise SchemaError(f"bad curve: {exc}") from exc


def _surface_of(data):
    if not isinstance(data, dict) or "curve" not in data or "base_point" not in data:
        raise SchemaError('surface file needs "curve" and "base_point"')
    curve = _curve_of(data)
    try:
        P = tuple(q_from_str(v) for v in data["base_point"])
    except (ValueError, TypeError) as exc:
        raise SchemaError(f"bad base point: {exc}") from exc
    if len(P) != 2:
        raise SchemaError("base point must be affine [x, y]")
    return DoubleCoverSurface(curve), P


def _lines_of(data) -> list[ProjLine]:
    try:
        return [ProjLine.from_json(l) for l in data]
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad line list: {exc}") from exc


def _model_of(data):
    if not isinstance(data, dict) or "c" not in data:
        raise SchemaError('model file needs "c", "q2", "q4", "q6"')
    try:
        model = V1Model.from_json(data)
    except (FanoError, ValueError) as exc:
        if isinstance(exc, DegeneracyReport):
            raise
        raise SchemaError(str(exc)) from exc
    point = data.get("point")
    if point is not None:
        try:
            point = tuple(q_from_str(v) for v in point)
        except (ValueError, TypeError) as exc:
            raise SchemaError(f"bad point: {exc}") from exc
        if len(point) != 4:
            raise SchemaError("point must be [x0, x1, x2, z]")
    return model, point


# --------------------------------------------------------------------------
# commands

def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def cmd_analyze_curve(args, out) -> int:
    curve = _curve_of(_load(args.input[0]))
    curve.require_reduced()
    locus = singular_points(curve)
    sings = [classify_singularity(curve, P).to_json() for P in locus.points]
    out.write(_dump({
        "degree": curve.degree,
        "reduced": curve.reduced,
        "singular_points": sings,
        "non_rational_singularities_possible": locus.non_rational_possible,
    }) + "\n")
    return EXIT_OK


def cmd_six_lines(args, out) -> int:
    lines = _lines_of(_load(args.input[0]))
    try:
        analysis = six_lines_analysis(lines)
    except CurveError as exc:
        raise SchemaError(str(exc)) from exc
    pts = [{"point": point_to_json(P), "multiplicity": m} for P, m in analysis]
    out.write(_dump({
        "points": pts,
        "double_points": sum(1 for _, m in analysis if m == 2),
        "triple_points": sum(1 for _, m in analysis if m == 3),
    }) + "\n")
    return EXIT_OK


def cmd_build_fibration(args, out) -> int:
    surface, P = _surface_of(_load(args.input[0]))
    fib = build_fibration(surface, P)
    out.write(_dump(fib.to_json()) + "\n")
    return EXIT_OK


def cmd_find_multisections(args, out) -> int:
    surface, P = _surface_of(_load(args.input[0]))
    fib = build_fibration(surface, P)
    ms = find_multisections(fib, args.search_height)
    if not ms:
        out.write(_dump({"multisections": [], "report": f"none found below height {args.search_height}"}) + "\n")
        return EXIT_OK
    for m in ms:
        row = m.to_json()
        row["witness_disc_t"] = q_to_str(fib.disc_t(m.witness_t)) if m.witness_t is not None else None
        out.write(_dump(row) + "\n")
    return EXIT_OK


def _point_lines(points, report_json) -> list[str]:
    rows = [_dump(p.to_json()) for p in points]
    rows.append(_dump(report_json))
    return rows


def cmd_generate_points(args, out) -> int:
    surface, P = _surface_of(_load(args.input[0]))
    fib = build_fibration(surface, P)
    ms = find_multisections(fib, args.search_height, limit=1)
    if not ms:
        out.write(_dump({"report": {"status": f"no multisection below height {args.search_height}",
                                    "points_emitted": 0}}) + "\n")
        return EXIT_OK
    m = ms[0]
    pts, report = generate_points(fib, m, args.t_height, args.k_max, args.height_cap_bits,
                                  args.threads, default_provenance(fib, m))
    for row in _point_lines(pts, report.to_json()):
        out.write(row + "\n")
    _maybe_svg(args, [p.t for p in pts])
    if not pts and report.overflow_fibers:
        return EXIT_OVERFLOW
    return EXIT_OK


def cmd_six_lines_generate(args, out) -> int:
    lines = _lines_of(_load(args.input[0]))
    pts, setup, report = six_lines_generate(lines, args.t_height, args.k_max,
                                            args.height_cap_bits, args.threads)
    rep = report.to_json()
    rep["report"]["setup"] = {"P": point_to_json(setup.P), "Q": point_to_json(setup.Q),
                              "L": setup.L.to_json(),
                              "chart": [[str(c) for c in row] for row in setup.chart]}
    for row in _point_lines(pts, rep):
        out.write(row + "\n")
    _maybe_svg(args, [p.t for p in pts])
    if not pts and report.overflow_fibers:
        return EXIT_OVERFLOW
    return EXIT_OK


def cmd_fano_demo(args, out) -> int:
    src = args.input[0] if args.input else "fixture:v1"
    model, point = _model_of(_load(src))
    if point is None:
        raise SchemaError('fano-demo needs a "point": [x0, x1, x2, z] on g = 0')
    fam = tangent_section_at(model, point)
    pts, report = v1_generate(model, point, search_height=args.search_height,
                              t_height=args.t_height, k_max=args.k_max,
                              height_cap_bits=args.height_cap_bits, workers=args.threads)
    rep = report.to_json()
    rep["report"]["family_dimension"] = fam.dimension
    rep["report"]["disc_at_point"] = q_to_str(disc_locus(model)(*point[:3]))
    for row in _point_lines(pts, rep):
        out.write(row + "\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    if len(args.input) != 2:
        raise SchemaError("verify needs CURVE_OR_MODEL and POINTS")
    data = _load(args.input[0])
    if isinstance(data, dict) and "c" in data:
        model, _ = _model_of(data)
        check = lambda row: _check_threefold(model, row)
    elif isinstance(data, list) and data and len(data) == 6 and all(len(l) == 3 for l in data) \
            and not isinstance(data[0][0], int):
        from .six_lines import lines_product
        f = lines_product(_lines_of(data))
        check = lambda row: _check_surface(f, row)
    else:
        f = _curve_of(data).f
        check = lambda row: _check_surface(f, row)
    try:
        with open(args.input[1]) as fh:
            rows = [line for line in fh if line.strip()]
    except OSError as exc:
        raise SchemaError(f"cannot read {args.input[1]}: {exc}") from exc
    checked = bad = 0
    for n, line in enumerate(rows, 1):
        try:
            row = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"line {n}: {exc}") from exc
        if "report" in row:
            continue
        checked += 1
        if not check(row):
            bad += 1
            print(_dump({"violation": n, "point": row}), file=sys.stderr)
    out.write(_dump({"checked": checked, "violations": bad}) + "\n")
    return EXIT_OK if bad == 0 else EXIT_FAIL


def _check_surface(f: Poly2, row) -> bool:
    try:
        x, y, w = (q_from_str(row[k]) for k in ("x", "y", "w"))
    except (KeyError, ValueError, TypeError) as exc:
        raise SchemaError(f"bad surface point {row!r}: {exc}") from exc
    return w * w == f(x, y)


def _check_threefold(model: V1Model, row) -> bool:
    try:
        x = [q_from_str(v) for v in row["x"]]
        z, w = q_from_str(row["z"]), q_from_str(row["w"])
    except (KeyError, ValueError, TypeError) as exc:
        raise SchemaError(f"bad threefold point {row!r}: {exc}") from exc
    return len(x) == 3 and w * w == model.g(*x, z)


# --------------------------------------------------------------------------
# output validation and plots

_POINT_KEYS = {"t", "k", "x", "y", "w", "provenance"}


def validate_output(command: str, text: str) -> None:
    """Re-parse emitted JSON and check it against the shape of its command."""
    lines = [l for l in text.splitlines() if l]
    rows = [json.loads(l) for l in lines]
    if command in ("generate-points", "six-lines-generate", "fano-demo"):
        if not rows or "report" not in rows[-1]:
            raise AssertionError("point stream must end with a report line")
        for row in rows[:-1]:
            if command == "fano-demo":
                ok = set(row) == {"x", "z", "w", "provenance"} and len(row["x"]) == 3
            else:
                ok = set(row) == _POINT_KEYS
            if not ok:
                raise AssertionError(f"malformed point line {row!r}")
            for v in ([row["w"], row["z"], *row["x"]] if command == "fano-demo"
                      else [row["t"], row["x"], row["y"], row["w"]]):
                q_from_str(v)
    elif command == "six-lines":
        (row,) = rows
        for p in row["points"]:
            if len(p["point"]) != 3 or p["multiplicity"] < 2:
                raise AssertionError(f"malformed intersection point {p!r}")
    elif command == "verify":
        (row,) = rows
        if set(row) != {"checked", "violations"}:
            raise AssertionError("malformed verify summary")


def write_svg(path: str, ts, title: str = "points per fiber") -> None:
    counts = sorted(Counter(ts).items())
    W, H, pad = 640, 360, 40
    if counts:
        tmin = float(min(t for t, _ in counts))
        tmax = float(max(t for t, _ in counts))
        cmax = max(c for _, c in counts)
    else:
        tmin, tmax, cmax = 0.0, 1.0, 1
    span = (tmax - tmin) or 1.0
    sx = lambda t: pad + (float(t) - tmin) / span * (W - 2 * pad)
    sy = lambda c: H - pad - c / cmax * (H - 2 * pad)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        f'<rect width="{W}" height="{H}" fill="white"/>',
        f'<text x="{W // 2}" y="20" text-anchor="middle" font-size="14">{title}</text>',
        f'<line x1="{pad}" y1="{H - pad}" x2="{W - pad}" y2="{H - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{H - pad}" stroke="black"/>',
        f'<text x="{W // 2}" y="{H - 8}" text-anchor="middle" font-size="12">t</text>',
        f'<text x="12" y="{H // 2}" font-size="12">n</text>',
        f'<text x="{pad}" y="{H - pad + 14}" font-size="10">{tmin:.3g}</text>',
        f'<text x="{W - pad}" y="{H - pad + 14}" text-anchor="end" font-size="10">{tmax:.3g}</text>',
        f'<text x="{pad - 4}" y="{pad + 4}" text-anchor="end" font-size="10">{cmax}</text>',
    ]
    for t, c in counts:
        parts.append(f'<circle cx="{sx(t):.2f}" cy="{sy(c):.2f}" r="3" fill="steelblue">'
                     f'<title>t={t} n={c}</title></circle>')
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")


def _maybe_svg(args, ts) -> None:
    if args.svg:
        write_svg(args.svg, ts)


# --------------------------------------------------------------------------

COMMANDS = {
    "analyze-curve": cmd_analyze_curve,
    "six-lines": cmd_six_lines,
    "build-fibration": cmd_build_fibration,
    "find-multisections": cmd_find_multisections,
    "generate-points": cmd_generate_points,
    "six-lines-generate": cmd_six_lines_generate,
    "fano-demo": cmd_fano_demo,
    "verify": cmd_verify,
}


def _positive(v: str) -> int:
    n = int(v)
    if n <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ellsurf", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("input", nargs="*", help="input JSON file(s) or fixture:NAME")
    p.add_argument("--t-height", type=_positive, default=50)
    p.add_argument("--k-max", type=_positive, default=8)
    p.add_argument("--search-height", type=_positive, default=30)
    p.add_argument("--height-cap-bits", type=_positive, default=DEFAULT_HEIGHT_CAP_BITS)
    p.add_argument("--threads", type=_positive, default=os.cpu_count() or 1)
    p.add_argument("--out", help="write output here instead of stdout")
    p.add_argument("--svg", metavar="PATH", help="write a points-per-fiber scatter plot")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized checks (unused by generation)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv: Optional[list[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_SCHEMA if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command != "fano-demo" and not args.input:
        print(_dump({"error": f"{args.command} needs an input file"}), file=sys.stderr)
        return EXIT_SCHEMA
    buf = io.StringIO()
    try:
        code = COMMANDS[args.command](args, buf)
    except DegeneracyReport as exc:
        print(_dump({"degeneracy": exc.to_json()}), file=sys.stderr)
        return EXIT_DEGENERATE
    except (SchemaError, FanoError, FibrationError, CurveError, EllipticError) as exc:
        print(_dump({"error": str(exc), "type": type(exc).__name__}), file=sys.stderr)
        return EXIT_SCHEMA
    text = buf.getvalue()
    validate_output(args.command, text)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
