"""Plane curves over Q: multiplicities, tangent cones, line intersections.

Affine points are pairs ``(x, y)``; projective points are normalized
triples ``(X, Y, Z)`` with Z = 1 for affine points and first nonzero
coordinate 1 at infinity.  Intersections with lines are always counted
projectively.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .arith import (
    Poly1, Poly2, as_q, height, q_to_str, rational_roots, rationals_by_height,
    square_free_part,
)

Point = tuple[Fraction, Fraction]
ProjPoint = tuple[Fraction, Fraction, Fraction]


class CurveError(ValueError):
    pass


class DegeneracyReport(CurveError):
    """A degenerate configuration the pipelines refuse to process.

    ``kind`` is one of "multiple components", "rational fibration",
    "triple point", "non-split node", "vertex-containing cubic".
    """

    def __init__(self, kind: str, detail: str = "", **data):
        super().__init__(f"{kind}: {detail}" if detail else kind)
        self.kind = kind
        self.detail = detail
        self.data = data

    def to_json(self) -> dict:
        out = {"kind": self.kind, "detail": self.detail}
        out.update(self.data)
        return out


def proj_normalize(p: Sequence) -> ProjPoint:
    X, Y, Z = (as_q(c) for c in p)
    if Z != 0:
        return (X / Z, Y / Z, Fraction(1))
    if X != 0:
        return (Fraction(1), Y / X, Fraction(0))
    if Y != 0:
        return (Fraction(0), Fraction(1), Fraction(0))
    raise CurveError("(0:0:0) is not a projective point")


def to_proj(p: Sequence) -> ProjPoint:
    if len(p) == 2:
        return (as_q(p[0]), as_q(p[1]), Fraction(1))
    return proj_normalize(p)


def affine_part(p: ProjPoint) -> Optional[Point]:
    if p[2] == 0:
        return None
    return (p[0], p[1])


def point_height(p: Sequence[Fraction]) -> int:
    return max(height(c) for c in p)


def point_to_json(p: Sequence[Fraction]) -> list[str]:
    return [q_to_str(c) for c in p]


# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ProjLine:
    """a*x + b*y + c*z = 0, normalized so the first nonzero coefficient is 1."""

    a: Fraction
    b: Fraction
    c: Fraction

    def __post_init__(self):
        a, b, c = as_q(self.a), as_q(self.b), as_q(self.c)
        lead = next((v for v in (a, b, c) if v != 0), None)
        if lead is None:
            raise CurveError("line with all coefficients zero")
        object.__setattr__(self, "a", a / lead)
        object.__setattr__(self, "b", b / lead)
        object.__setattr__(self, "c", c / lead)

    @classmethod
    def through(cls, p: Point, q: Point) -> "ProjLine":
        P, Q = to_proj(p), to_proj(q)
        if P == Q:
            raise CurveError("need two distinct points for a line")
        return cls(*_cross(P, Q))

    @classmethod
    def through_with_direction(cls, p: Point, direction: Point) -> "ProjLine":
        dx, dy = map(as_q, direction)
        return cls(dy, -dx, dx * p[1] - dy * p[0])

    @property
    def coeffs(self) -> ProjPoint:
        return (self.a, self.b, self.c)

    @property
    def at_infinity(self) -> bool:
        return self.a == 0 and self.b == 0

    def contains(self, p: Sequence) -> bool:
        P = to_proj(p)
        return self.a * P[0] + self.b * P[1] + self.c * P[2] == 0

    def parametrization(self) -> tuple[Point, Point]:
        """(base point, direction) for an affine line: points base + s*dir."""
        if self.at_infinity:
            raise CurveError("the line at infinity has no affine parametrization")
        if self.b != 0:
            base = (Fraction(0), -self.c / self.b)
        else:
            base = (-self.c / self.a, Fraction(0))
        return base, (-self.b, self.a)

    def point_at_infinity(self) -> ProjPoint:
        if self.at_infinity:
            return (Fraction(0), Fraction(1), Fraction(0))
        return proj_normalize((-self.b, self.a, 0))

    def meet(self, other: "ProjLine") -> ProjPoint:
        X = _cross(self.coeffs, other.coeffs)
        if all(v == 0 for v in X):
            raise CurveError("lines coincide")
        return proj_normalize(X)

    def to_json(self) -> list[str]:
        return [q_to_str(v) for v in self.coeffs]

    @classmethod
    def from_json(cls, data) -> "ProjLine":
        if len(data) != 3:
            raise ValueError(f"line must be a homogeneous triple, got {data!r}")
        return cls(*(as_q(v) for v in data))


def _cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PlaneCurve:
    """Affine equation f(x, y) = 0 of a projective plane curve of degree d."""

    f: Poly2
    reduced: bool = field(init=False)

    def __post_init__(self):
        if self.f.is_zero():
            raise CurveError("zero polynomial does not define a curve")
        if self.f.total_degree < 1:
            raise CurveError("constant polynomial does not define a curve")
        sqf = square_free_part(self.f)
        object.__setattr__(self, "reduced", sqf.total_degree == self.f.total_degree)

    @property
    def degree(self) -> int:
        return self.f.total_degree

    def __call__(self, x, y) -> Fraction:
        return self.f(x, y)

    def contains(self, p: Sequence) -> bool:
        P = to_proj(p)
        return self.eval_proj(P) == 0

    def eval_proj(self, P: ProjPoint) -> Fraction:
        d = self.degree
        X, Y, Z = P
        return sum((c * X ** i * Y ** j * Z ** (d - i - j) for (i, j), c in self.f.terms.items()),
                   Fraction(0))

    def chart_at(self, P: ProjPoint) -> tuple[Poly2, Point]:
        """Local affine equation and coordinates of P in a chart containing it."""
        if P[2] != 0:
            return self.f, (P[0], P[1])
        d = self.degree
        if P[0] != 0:
            # chart X = 1, coordinates (Y, Z)
            g = Poly2({(j, d - i - j): c for (i, j), c in self.f.terms.items()})
            return g, (P[1] / P[0], Fraction(0))
        g = Poly2({(i, d - i - j): c for (i, j), c in self.f.terms.items()})
        return g, (Fraction(0), Fraction(0))

    def require_reduced(self) -> None:
        if not self.reduced:
            raise DegeneracyReport(
                "multiple components",
                "branch curve is not reduced; the double cover is birational to one "
                "branched in a curve of degree at most 4",
                square_free_part=square_free_part(self.f).to_json(),
            )

    def to_json(self) -> list:
        return self.f.to_json()

    @classmethod
    def from_json(cls, data) -> "PlaneCurve":
        return cls(Poly2.from_json(data))


def multiplicity_at(curve: PlaneCurve, p: Sequence) -> int:
    """Order of vanishing of the curve equation at p (0 if p is off the curve)."""
    P = to_proj(p)
    if P[2] == 1:
        if curve.f(P[0], P[1]) != 0:
            return 0
        if any(curve.f.gradient(P[0], P[1])):
            return 1
    g, (a, b) = curve.chart_at(P)
    return g.translate(a, b).low_degree()


@dataclass(frozen=True)
class SingularityReport:
    point: ProjPoint
    multiplicity: int
    linear_factors: tuple[tuple[tuple[Fraction, Fraction], int], ...]  # (a, b) for a*X + b*Y
    residual_degree: int
    kind: str  # node_split | node_nonsplit | cusp_like | higher
    tangent_cone: Poly2

    def to_json(self) -> dict:
        return {
            "point": point_to_json(self.point),
            "multiplicity": self.multiplicity,
            "kind": self.kind,
            "tangent_cone": self.tangent_cone.to_json(),
            "linear_factors": [
                {"line": [q_to_str(l[0]), q_to_str(l[1])], "multiplicity": m}
                for l, m in self.linear_factors
            ],
            "residual_degree": self.residual_degree,
        }


def factor_binary_form(h: Poly2) -> tuple[list[tuple[tuple[Fraction, Fraction], int]], int]:
    """Rational linear factors a*X + b*Y of a binary form, plus residual degree."""
    m = h.total_degree
    # h(X, 1) as a polynomial in X; roots X = r give factors X - r*Y
    hx = h.eval_y(1)
    roots, rest = rational_roots(hx)
    factors = [((Fraction(1), -r), k) for r, k in roots]
    y_power = m - hx.degree
    if y_power:
        factors.append(((Fraction(0), Fraction(1)), y_power))
    factors.sort()
    return factors, rest


def classify_singularity(curve: PlaneCurve, p: Sequence) -> SingularityReport:
    P = to_proj(p)
    g, (a, b) = curve.chart_at(P)
    local = g.translate(a, b)
    m = local.low_degree()
    if m < 2:
        raise CurveError(f"not singular: multiplicity {m} at {point_to_json(P)}")
    cone = local.homogeneous_part(m)
    factors, residual = factor_binary_form(cone)
    if m == 2:
        if residual == 2:
            kind = "node_nonsplit"
        elif len(factors) == 2:
            kind = "node_split"
        else:
            kind = "cusp_like"
    else:
        kind = "higher"
    return SingularityReport(P, m, tuple(factors), residual, kind, cone)


# --------------------------------------------------------------------------

@dataclass(frozen=True)
class IntersectionProfile:
    points: tuple[tuple[ProjPoint, int], ...]
    residual_degree: int

    def multiplicity_of(self, p: Sequence) -> int:
        P = to_proj(p)
        return next((m for q, m in self.points if q == P), 0)

    def to_json(self) -> dict:
        return {
            "points": [{"point": point_to_json(p), "multiplicity": m} for p, m in self.points],
            "residual_degree": self.residual_degree,
        }


def restrict_to_line(curve: PlaneCurve, line: ProjLine) -> Poly1:
    """The curve equation along the line's affine parametrization."""
    if line.at_infinity:
        top = curve.f.homogeneous_part(curve.degree)
        return top.eval_x(1)
    (x0, y0), (dx, dy) = line.parametrization()
    return curve.f.restrict(x0, dx, y0, dy)


def intersection_profile(curve: PlaneCurve, line: ProjLine) -> IntersectionProfile:
    r = restrict_to_line(curve, line)
    if r.is_zero():
        raise CurveError("line is a component")
    roots, rest = rational_roots(r)
    pts: list[tuple[ProjPoint, int]] = []
    if line.at_infinity:
        for s, m in roots:
            pts.append((proj_normalize((1, s, 0)), m))
    else:
        (x0, y0), (dx, dy) = line.parametrization()
        for s, m in roots:
            pts.append(((x0 + s * dx, y0 + s * dy, Fraction(1)), m))
    at_inf = curve.degree - r.degree
    if at_inf:
        pts.append((line.point_at_infinity(), at_inf))
    pts.sort(key=lambda pm: (pm[0][2] == 0, point_height(pm[0]), pm[0]))
    return IntersectionProfile(tuple(pts), rest)


def tangent_line(curve: PlaneCurve, r: Point) -> ProjLine:
    fx, fy = curve.f.gradient(*r)
    if fx == 0 and fy == 0:
        raise CurveError(f"{point_to_json(r)} is a singular point")
    return ProjLine(fx, fy, -fx * r[0] - fy * r[1])


@dataclass(frozen=True)
class TangentPair:
    r: Point
    r_prime: Point
    tangent_line: ProjLine
    transversal: bool = True

    def to_json(self) -> dict:
        return {
            "r": point_to_json(self.r),
            "r_prime": point_to_json(self.r_prime),
            "tangent_line": self.tangent_line.to_json(),
            "transversal": self.transversal,
        }


def tangent_pairs(curve: PlaneCurve, r: Sequence) -> list[TangentPair]:
    """Rational points where the tangent line at r meets the curve transversally."""
    r = (as_q(r[0]), as_q(r[1]))
    if curve(*r) != 0:
        raise CurveError(f"{point_to_json(r)} is not on the curve")
    T = tangent_line(curve, r)
    try:
        prof = intersection_profile(curve, T)
    except CurveError:
        # the tangent line is a component of the curve
        return []
    out = []
    for P, m in prof.points:
        if m == 1 and P[2] == 1 and (P[0], P[1]) != r:
            out.append(TangentPair(r, (P[0], P[1]), T))
    return out


def six_lines_analysis(lines: Sequence[ProjLine]) -> list[tuple[ProjPoint, int]]:
    """Intersection points of six distinct lines with the number of lines through each."""
    lines = list(lines)
    if len(lines) != 6:
        raise CurveError(f"expected 6 lines, got {len(lines)}")
    if len(set(lines)) != 6:
        raise CurveError("duplicate lines in configuration")
    pts = {l1.meet(l2) for l1, l2 in combinations(lines, 2)}
    out = [(P, sum(1 for l in lines if l.contains(P))) for P in pts]
    out.sort(key=lambda pm: (-pm[1], P_key(pm[0])))
    return out


def P_key(P: ProjPoint):
    return (P[2] == 0, point_height(P), P)


# --------------------------------------------------------------------------
# rational points and singular points

def rational_points(curve: PlaneCurve, max_height: int,
                    extra_lines: Iterable[ProjLine] = ()) -> list[Point]:
    """Affine rational points found on vertical and horizontal lines of bounded height.

    Lines that are components of the curve are skipped.  Sorted by height.
    """
    found: set[Point] = set()
    f = curve.f
    for c in rationals_by_height(max_height):
        c = as_q(c)
        for poly, put in ((f.eval_x(c), lambda t: (c, t)), (f.eval_y(c), lambda t: (t, c))):
            if poly.is_zero() or poly.degree < 1:
                continue
            for t, _m in rational_roots(poly)[0]:
                p = put(t)
                if point_height(p) <= max_height:
                    found.add(p)
    for line in extra_lines:
        try:
            prof = intersection_profile(curve, line)
        except CurveError:
            continue
        for P, _m in prof.points:
            if P[2] == 1 and point_height(P) <= max_height:
                found.add((P[0], P[1]))
    return sorted(found, key=lambda p: (point_height(p), p))


@dataclass(frozen=True)
class SingularLocus:
    points: tuple[ProjPoint, ...]
    non_rational_possible: bool


def singular_points(curve: PlaneCurve) -> SingularLocus:
    """Rational singular points (affine and at infinity) of a reduced curve.

    Candidate x-coordinates are common roots of Res_y(f, f_x + k f_y) for two
    values of k; a leftover irrational common factor flags possible
    non-rational singular points.
    """
    from .arith import resultant_y

    f = curve.f
    fx, fy = f.dx(), f.dy()
    res = []
    k = 1
    while len(res) < 2 and k < 20:
        r = resultant_y(f, fx + fy * k)
        if not r.is_zero():
            res.append(r)
        k += 1
    pts: set[ProjPoint] = set()
    non_rational = False
    if len(res) == 2 and f.deg_y() > 0:
        g = res[0].gcd(res[1])
        if g.degree > 0:
            roots, rest = rational_roots(g)
            # rest may contain x-coordinates of irrational singular points
            non_rational = rest > 0
            for x0, _m in roots:
                polys = [p for p in (f.eval_x(x0), fx.eval_x(x0), fy.eval_x(x0)) if not p.is_zero()]
                if not polys:
                    continue
                h = polys[0]
                for p in polys[1:]:
                    h = h.gcd(p)
                if h.degree < 1:
                    continue
                for y0, _m in rational_roots(h)[0]:
                    if multiplicity_at(curve, (x0, y0)) >= 2:
                        pts.add((x0, y0, Fraction(1)))
    elif f.deg_y() == 0:
        # curve is a union of vertical lines: singular only at infinity
        pass
    # singular points among the points at infinity; projective duplicates collapse
    top = f.homogeneous_part(curve.degree)
    hx = top.eval_y(1)
    cands = [proj_normalize((r, 1, 0)) for r, _ in rational_roots(hx)[0]] if hx.degree > 0 else []
    if hx.degree < curve.degree:
        cands.append((Fraction(1), Fraction(0), Fraction(0)))
    if hx.is_zero():
        cands = []
    for P in cands:
        if multiplicity_at(curve, P) >= 2:
            pts.add(P)
    return SingularLocus(tuple(sorted(pts, key=P_key)), non_rational)
