"""Double planes branched along six lines.

Two double points P, Q of the configuration give two pencil fibrations.
For a line L of the configuration avoiding P and Q and a rational point l
on L, the preimage of the line through Q and l is a fiber of the Q-pencil,
and it touches the P-fiber through l at the ramification point over l.
That fiber is then fed to the generation engine as a multisection of the
P-pencil.

If fewer than two double points are affine, a projective change of
coordinates moves the line at infinity off all intersection points first;
generated points are mapped back to the original chart.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

from .arith import Poly2, rationals_by_height
from .elliptic import DEFAULT_HEIGHT_CAP_BITS
from .fibration import (
    DoubleCoverSurface, EllipticFibration, GeneratedPoint, Multisection,
    build_fibration, default_provenance, generate_points, multisection_model,
)
from .plane_curves import (
    CurveError, PlaneCurve, ProjLine, ProjPoint, point_to_json, six_lines_analysis,
)

Matrix = tuple[tuple[Fraction, ...], ...]

_IDENTITY: Matrix = tuple(tuple(Fraction(int(i == j)) for j in range(3)) for i in range(3))


def _det3(M) -> Fraction:
    return (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
            - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
            + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]))


def _inv3(M) -> Matrix:
    d = _det3(M)
    cof = [[Fraction(0)] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            rows = [r for r in range(3) if r != i]
            cols = [c for c in range(3) if c != j]
            minor = M[rows[0]][cols[0]] * M[rows[1]][cols[1]] - M[rows[0]][cols[1]] * M[rows[1]][cols[0]]
            cof[i][j] = (-1) ** (i + j) * minor
    return tuple(tuple(cof[j][i] / d for j in range(3)) for i in range(3))


def _apply(M, v):
    return tuple(sum(M[i][j] * v[j] for j in range(3)) for i in range(3))


def _line_in_chart(line: ProjLine, Minv) -> ProjLine:
    # new coefficients are the row vector (a, b, c) * Minv
    a = line.coeffs
    return ProjLine(*(sum(a[i] * Minv[i][j] for i in range(3)) for j in range(3)))


def _choose_chart(points: Sequence[ProjPoint], lines: Sequence[ProjLine]) -> Matrix:
    """Matrix M whose last row is a line avoiding every intersection point.

    The identity is used whenever all intersection points are already affine.
    """
    if all(P[2] != 0 for P in points):
        return _IDENTITY
    for h in range(1, 4):
        for a, b in product(range(-h, h + 1), repeat=2):
            H = (Fraction(a), Fraction(b), Fraction(1))
            if max(abs(a), abs(b)) != h:
                continue
            if any(sum(H[i] * P[i] for i in range(3)) == 0 for P in points):
                continue
            if any(l == ProjLine(*H) for l in lines):
                continue
            for r1, r2 in ((0, 1), (0, 2), (1, 2)):
                M = (_IDENTITY[r1], _IDENTITY[r2], H)
                if _det3(M) != 0:
                    return M
    raise CurveError("no small line at infinity avoids the configuration")


@dataclass(frozen=True)
class SixLinesSetup:
    lines: tuple[ProjLine, ...]
    chart: Matrix
    chart_inv: Matrix
    surface: DoubleCoverSurface
    P: tuple[Fraction, Fraction]
    Q: tuple[Fraction, Fraction]
    L: ProjLine
    fibration: EllipticFibration
    multisection: Multisection

    def to_original(self, x, y, w) -> Optional[tuple[Fraction, Fraction, Fraction]]:
        X = _apply(self.chart_inv, (x, y, Fraction(1)))
        if X[2] == 0:
            return None
        return (X[0] / X[2], X[1] / X[2], w / X[2] ** 3)

    def to_json(self) -> dict:
        return {
            "lines": [l.to_json() for l in self.lines],
            "chart": [[str(c) for c in row] for row in self.chart],
            "P": point_to_json(self.P),
            "Q": point_to_json(self.Q),
            "L": self.L.to_json(),
            "fibration": self.fibration.to_json(),
            "multisection": self.multisection.to_json(),
        }


def lines_product(lines: Sequence[ProjLine]) -> Poly2:
    f = Poly2.const(1)
    for l in lines:
        a, b, c = l.coeffs
        f = f * Poly2.linear(a, b, c)
    return f


def setup_six_lines(lines: Sequence[ProjLine], l_height: int = 20) -> SixLinesSetup:
    lines = tuple(lines)
    analysis = six_lines_analysis(lines)
    pts = [P for P, _ in analysis]
    M = _choose_chart(pts, lines)
    Minv = _inv3(M)
    chart_lines = [_line_in_chart(l, Minv) for l in lines]
    doubles = [_apply(M, P) for P, m in analysis if m == 2]
    doubles = [(D[0] / D[2], D[1] / D[2]) for D in doubles]
    if len(doubles) < 2:
        raise CurveError(f"configuration has {len(doubles)} double points, need 2")
    P, Q = doubles[0], doubles[1]
    surface = DoubleCoverSurface(PlaneCurve(lines_product(chart_lines)))
    fib = build_fibration(surface, P)
    f = surface.branch.f
    for L in chart_lines:
        if L.contains(P) or L.contains(Q):
            continue
        base, direction = L.parametrization()
        for u in rationals_by_height(l_height):
            l = (base[0] + u * direction[0], base[1] + u * direction[1])
            if sum(1 for other in chart_lines if other.contains(l)) != 1:
                continue
            line = ProjLine.through(Q, l)
            if line.contains(P):
                continue
            t0, _ = fib.coordinates_of(l)
            if not fib.is_smooth(t0):
                continue
            d = (l[0] - Q[0], l[1] - Q[1])
            model = multisection_model(f, Q, d)
            if model is None or model.degenerate:
                continue
            m = Multisection(line=line, center=Q, direction=d, model=model, witness_t=t0,
                             witness_point=(l[0], l[1], Fraction(0)), kind="pencil")
            return SixLinesSetup(lines, M, Minv, surface, P, Q, L, fib, m)
    raise CurveError("no usable point l found on the lines avoiding P and Q")


def six_lines_generate(lines: Sequence[ProjLine], t_height: int, k_max: int,
                       height_cap_bits: int = DEFAULT_HEIGHT_CAP_BITS, workers: int = 1):
    """Generated points in the original coordinates, with the setup and report."""
    setup = setup_six_lines(lines)
    prov = default_provenance(setup.fibration, setup.multisection)
    prov["chart"] = [[str(c) for c in row] for row in setup.chart]
    pts, report = generate_points(setup.fibration, setup.multisection, t_height, k_max,
                                  height_cap_bits, workers, prov)
    f = lines_product(lines)
    out: list[GeneratedPoint] = []
    for p in pts:
        xyw = setup.to_original(p.x, p.y, p.w)
        if xyw is None:
            report.skipped_points += 1
            continue
        x, y, w = xyw
        if w * w != f(x, y):
            raise AssertionError(f"six-line point off the surface: {xyw}")
        out.append(GeneratedPoint(p.t, p.k, x, y, w, prov))
    report.points_emitted = len(out)
    return out, setup, report
