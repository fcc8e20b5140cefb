"""Double Veronese cone V1: w^2 = g(x0, x1, x2, z) in P(1,1,1,2,3).

g = c z^3 + q2(x) z^2 + q4(x) z + q6(x) with qk a ternary form of degree k.
Projecting away from w and z gives a fibration over the x-plane whose
fibers are the plane cubics w^2 = g(xhat, z).

A quadric section z = q(x) cuts out a double plane w^2 = g(x, q(x)) with a
sextic branch curve.  When q agrees with the ramification surface g = 0 to
first order at a point P, the branch curve acquires a double point there,
and the surface machinery applies with P as base point.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterator, Optional, Sequence

from .arith import Poly2, as_q, q_from_str, q_to_str
from .elliptic import DEFAULT_HEIGHT_CAP_BITS, EllipticError, WeierstrassCurve, long_to_short
from .fibration import (
    DoubleCoverSurface, build_fibration, find_multisections, generate_points,
)
from .plane_curves import CurveError, DegeneracyReport, PlaneCurve, classify_singularity, multiplicity_at

log = logging.getLogger(__name__)

Exp = tuple[int, int, int]


class FanoError(ValueError):
    pass


# --------------------------------------------------------------------------
# ternary forms

class Form:
    """Polynomial in x0, x1, x2 stored as {(e0, e1, e2): coefficient}."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean: dict[Exp, Fraction] = {}
        for e, c in (terms or {}).items():
            c = as_q(c)
            if c:
                clean[tuple(e)] = clean.get(tuple(e), Fraction(0)) + c
        self.terms = {e: c for e, c in clean.items() if c}

    @classmethod
    def var(cls, i: int) -> "Form":
        e = [0, 0, 0]
        e[i] = 1
        return cls({tuple(e): 1})

    @classmethod
    def const(cls, c) -> "Form":
        return cls({(0, 0, 0): c})

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {sum(e) for e in self.terms}

    def is_homogeneous(self, d: int) -> bool:
        return all(sum(e) == d for e in self.terms)

    def __add__(self, other):
        other = other if isinstance(other, Form) else Form.const(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return Form(out)

    __radd__ = __add__

    def __neg__(self):
        return Form({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-(other if isinstance(other, Form) else Form.const(other)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Form):
            k = as_q(other)
            return Form({e: c * k for e, c in self.terms.items()})
        out: dict[Exp, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return Form(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Form.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, Form) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __call__(self, x0, x1, x2) -> Fraction:
        x = (as_q(x0), as_q(x1), as_q(x2))
        return sum((c * x[0] ** e[0] * x[1] ** e[1] * x[2] ** e[2] for e, c in self.terms.items()),
                   Fraction(0))

    def diff(self, i: int) -> "Form":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return Form(out)

    def permuted(self, order: Sequence[int]) -> "Form":
        # new variable i is old variable order[i]
        return Form({tuple(e[order[i]] for i in range(3)): c for e, c in self.terms.items()})

    def chart(self) -> Poly2:
        """Dehomogenize at x0 = 1 as a polynomial in (x1, x2)."""
        out: dict = {}
        for e, c in self.terms.items():
            out[(e[1], e[2])] = out.get((e[1], e[2]), Fraction(0)) + c
        return Poly2(out)

    def to_json(self) -> list:
        return [[*e, q_to_str(c)] for e, c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, data, degree: int) -> "Form":
        terms: dict = {}
        for entry in data:
            if len(entry) == 4:
                e = tuple(int(v) for v in entry[:3])
            elif len(entry) == 3:
                i, j = int(entry[0]), int(entry[1])
                e = (degree - i - j, i, j)
            else:
                raise FanoError(f"bad monomial entry {entry!r}")
            if min(e) < 0:
                raise FanoError(f"monomial {entry!r} exceeds degree {degree}")
            c = entry[-1]
            if isinstance(c, float):
                raise FanoError("floating-point coefficients are not accepted")
            terms[e] = terms.get(e, Fraction(0)) + q_from_str(c)
        return cls(terms)

    def __repr__(self):
        return f"Form({self.to_json()})"


def _quad_basis() -> list[Exp]:
    return [(2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2)]


# --------------------------------------------------------------------------
# the model

@dataclass(frozen=True)
class V1Model:
    c: Fraction
    q2: Form
    q4: Form
    q6: Form

    def __post_init__(self):
        object.__setattr__(self, "c", as_q(self.c))
        if self.c == 0:
            raise DegeneracyReport(
                "vertex-containing cubic",
                "z^3 coefficient vanishes: the cubic contains the vertex, so the threefold "
                "is a P1-fibration over a K3 surface and not rationally connected",
            )
        for name, d in (("q2", 2), ("q4", 4), ("q6", 6)):
            if not getattr(self, name).is_homogeneous(d):
                raise FanoError(f"{name} is not homogeneous of degree {d}")

    def g(self, x0, x1, x2, z) -> Fraction:
        z = as_q(z)
        return ((self.c * z + self.q2(x0, x1, x2)) * z + self.q4(x0, x1, x2)) * z + self.q6(x0, x1, x2)

    def g_z(self, x0, x1, x2, z) -> Fraction:
        z = as_q(z)
        return (3 * self.c * z + 2 * self.q2(x0, x1, x2)) * z + self.q4(x0, x1, x2)

    def g_x(self, i: int, x0, x1, x2, z) -> Fraction:
        z = as_q(z)
        return (self.q2.diff(i)(x0, x1, x2) * z + self.q4.diff(i)(x0, x1, x2)) * z \
            + self.q6.diff(i)(x0, x1, x2)

    def slice_form(self, q: Form) -> Form:
        """g(x, q(x)) as a ternary sextic."""
        return ((q * self.c + self.q2) * q + self.q4) * q + self.q6

    def permuted(self, order: Sequence[int]) -> "V1Model":
        return V1Model(self.c, self.q2.permuted(order), self.q4.permuted(order),
                       self.q6.permuted(order))

    def contains(self, pt: Sequence) -> bool:
        x0, x1, x2, z, w = (as_q(v) for v in pt)
        return w * w == self.g(x0, x1, x2, z)

    def to_json(self) -> dict:
        return {"c": q_to_str(self.c), "q2": self.q2.to_json(), "q4": self.q4.to_json(),
                "q6": self.q6.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "V1Model":
        try:
            c = data["c"]
            if isinstance(c, float):
                raise FanoError("floating-point coefficients are not accepted")
            return cls(q_from_str(c), Form.from_json(data.get("q2", []), 2),
                       Form.from_json(data.get("q4", []), 4), Form.from_json(data.get("q6", []), 6))
        except (KeyError, TypeError) as exc:
            raise FanoError(f"malformed model: {exc}") from exc


@dataclass(frozen=True)
class VerticalFiber:
    """w^2 = c z^3 + a2 z^2 + a4 z + a6 over a point of the x-plane."""

    xhat: tuple[Fraction, Fraction, Fraction]
    coeffs: tuple[Fraction, Fraction, Fraction, Fraction]
    weierstrass: Optional[WeierstrassCurve]

    @property
    def smooth(self) -> bool:
        return self.weierstrass is not None

    def to_weierstrass(self, z, w):
        """(z, w) on the cubic model to a point of the short model."""
        from .elliptic import ECPoint

        c, a2, _, _ = self.coeffs
        X, Y = c * as_q(z), c * as_q(w)
        return ECPoint(X + a2 / 3, Y)


def vertical_fiber(model: V1Model, xhat: Sequence) -> VerticalFiber:
    x = tuple(as_q(v) for v in xhat)
    if not any(x):
        raise FanoError("direction (0:0:0)")
    c = model.c
    a2, a4, a6 = model.q2(*x), model.q4(*x), model.q6(*x)
    # z = X/c, w = Y/c turns it into Y^2 = X^3 + a2 X^2 + c a4 X + c^2 a6
    try:
        E = long_to_short(0, a2, 0, c * a4, c * c * a6).curve
    except EllipticError:
        E = None
    return VerticalFiber(x, (c, a2, a4, a6), E)


def disc_locus(model: V1Model) -> Form:
    """z-discriminant of g: vanishes exactly where the fiber cubic has a repeated root."""
    a, b, c, d = Form.const(model.c), model.q2, model.q4, model.q6
    D = (18 * a * b * c * d - 4 * b ** 3 * d + b * b * c * c
         - 4 * a * c ** 3 - 27 * a * a * d * d)
    if D.is_zero():
        raise FanoError("discriminant locus is everything: every vertical fiber is singular")
    return D


def cubic_discriminant(coeffs) -> Fraction:
    a, b, c, d = coeffs
    return 18 * a * b * c * d - 4 * b ** 3 * d + b * b * c * c - 4 * a * c ** 3 - 27 * a * a * d * d


# --------------------------------------------------------------------------
# quadric sections tangent to the ramification surface

def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    M = [list(r) for r in rows]
    pivots: list[int] = []
    rank = 0
    ncols = len(M[0]) - 1 if M else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(M)) if M[i][col] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        p = M[rank][col]
        M[rank] = [v / p for v in M[rank]]
        for i in range(len(M)):
            if i != rank and M[i][col] != 0:
                k = M[i][col]
                M[i] = [a - k * b for a, b in zip(M[i], M[rank])]
        pivots.append(col)
        rank += 1
    return M, pivots


@dataclass(frozen=True)
class QuadricSection:
    q: Form  # in the original coordinates
    tangency_point: tuple[Fraction, ...]  # (x0, x1, x2, z)
    member: tuple[int, int, int] = (0, 0, 0)

    def to_json(self) -> dict:
        return {"q": self.q.to_json(), "tangency_point": [q_to_str(v) for v in self.tangency_point],
                "member": list(self.member)}


@dataclass(frozen=True)
class TangentSectionFamily:
    """Affine 3-dimensional family of quadrics q with q(P) = zP and dq(P) = dz|_R(P).

    Members are particular + sum of members[i] * basis[i] with integer weights;
    the basis quadrics vanish to second order at P.
    """

    point: tuple[Fraction, Fraction, Fraction, Fraction]
    order: tuple[int, int, int]  # chart permutation: chart variable i is original variable order[i]
    chart_point: tuple[Fraction, Fraction]
    particular: Form
    basis: tuple[Form, Form, Form]
    dimension: int

    def member(self, coeffs: Sequence[int]) -> QuadricSection:
        q = self.particular
        for k, b in zip(coeffs, self.basis):
            q = q + b * k
        return QuadricSection(q, self.point, tuple(int(k) for k in coeffs))

    def members(self, max_height: int) -> Iterator[QuadricSection]:
        for h in range(max_height + 1):
            for v in product(range(-h, h + 1), repeat=3):
                if max((abs(k) for k in v), default=0) == h:
                    yield self.member(v)


def _inverse_order(order):
    inv = [0, 0, 0]
    for i, o in enumerate(order):
        inv[o] = i
    return tuple(inv)


def tangent_section_at(model: V1Model, P: Sequence) -> TangentSectionFamily:
    """Quadric sections through P tangent to the ramification surface g = 0 there.

    P = (x0, x1, x2, zP).  Requires g(P) = 0, dg/dz(P) != 0 (the surface is
    locally a graph z = phi(x)) and xhat(P) off the discriminant locus.
    """
    x = tuple(as_q(v) for v in P[:3])
    zP = as_q(P[3])
    if not any(x):
        raise FanoError("x-image of P is (0:0:0)")
    if model.g(*x, zP) != 0:
        raise FanoError("P is not on the ramification surface g = 0")
    if model.g_z(*x, zP) == 0:
        raise FanoError("dg/dz vanishes at P: the ramification surface is not a graph over the x-plane")
    if disc_locus(model)(*x) == 0:
        raise FanoError("the x-image of P lies on the discriminant locus")
    k = next(i for i in range(3) if x[i] != 0)
    order = (k,) + tuple(i for i in range(3) if i != k)
    # scale so the chart coordinate is 1; z scales with weight 2
    lam = x[k]
    xs = tuple(v / lam for v in x)
    zs = zP / lam ** 2
    a, b = xs[order[1]], xs[order[2]]
    gz = model.g_z(*xs, zs)
    phi = [-model.g_x(order[i], *xs, zs) / gz for i in (1, 2)]
    # q(1, x1, x2) in chart variables: value zs and gradient phi at (a, b)
    pt = (Fraction(1), a, b)
    mons = _quad_basis()
    row_val = [pt[0] ** e[0] * pt[1] ** e[1] * pt[2] ** e[2] for e in mons] + [zs]
    row_d1 = [e[1] * pt[1] ** max(e[1] - 1, 0) * pt[2] ** e[2] for e in mons] + [phi[0]]
    row_d2 = [e[2] * pt[1] ** e[1] * pt[2] ** max(e[2] - 1, 0) for e in mons] + [phi[1]]
    rows = [row_val, row_d1, row_d2]
    R, pivots = _rref(rows)
    if any(all(v == 0 for v in r[:-1]) and r[-1] != 0 for r in R):
        raise FanoError("tangency conditions are inconsistent")
    dimension = len(mons) - len(pivots)
    X0, X1, X2 = Form.var(0), Form.var(1), Form.var(2)
    u, v = X1 - X0 * a, X2 - X0 * b
    part_chart = X0 * X0 * zs + X0 * u * phi[0] + X0 * v * phi[1]
    basis_chart = (u * u, u * v, v * v)
    inv = _inverse_order(order)
    # back to original variables, then undo the scaling of P
    to_orig = lambda F: F.permuted(inv)
    fam = TangentSectionFamily(
        point=(*x, zP), order=order, chart_point=(a, b),
        particular=to_orig(part_chart), basis=tuple(to_orig(B) for B in basis_chart),
        dimension=dimension,
    )
    # every member must satisfy the linear system; check the particular and basis
    for F, target in ((fam.particular, (zs, phi[0], phi[1])),) + tuple((B, (0, 0, 0)) for B in fam.basis):
        Fc = F.permuted(order)
        got = (Fc(1, a, b), Fc.diff(1)(1, a, b), Fc.diff(2)(1, a, b))
        if got != tuple(as_q(t) for t in target):
            raise AssertionError("tangent section basis violates the tangency system")
    return fam


def slice_sextic(model: V1Model, fam: TangentSectionFamily, sec: QuadricSection) -> Poly2:
    """Branch sextic of the slice, in the chart variables of the family."""
    return model.slice_form(sec.q).permuted(fam.order).chart()


# --------------------------------------------------------------------------
# generation on the threefold

@dataclass(frozen=True)
class ThreefoldPoint:
    x: tuple[Fraction, Fraction, Fraction]
    z: Fraction
    w: Fraction
    member: tuple[int, int, int]
    t: Fraction
    k: int

    def to_json(self) -> dict:
        return {
            "x": [q_to_str(v) for v in self.x],
            "z": q_to_str(self.z),
            "w": q_to_str(self.w),
            "provenance": {"member": list(self.member), "t": q_to_str(self.t), "k": self.k},
        }


@dataclass
class V1Report:
    status: str = "ok"
    members_tried: int = 0
    members_used: int = 0
    member_failures: dict = field(default_factory=dict)
    points_emitted: int = 0
    vertical_fibers: int = 0
    surface_reports: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"report": dict(self.__dict__)}


def _fail(report: V1Report, member, reason: str) -> None:
    report.member_failures[str(list(member))] = reason


def v1_generate(model: V1Model, P: Sequence, member_height: int = 3, members_wanted: int = 1,
                search_height: int = 30, t_height: int = 50, k_max: int = 8,
                height_cap_bits: int = DEFAULT_HEIGHT_CAP_BITS, workers: int = 1,
                max_members: int = 60):
    """Threefold points (x, z, w) with w^2 = g(x, z), from tangent quadric sections at P.

    Family members are tried in height order until ``members_wanted`` of
    them produced points (or ``max_members`` were tried).
    """
    report = V1Report()
    if min(member_height, members_wanted, search_height, t_height, k_max) <= 0:
        report.status = "no generation attempted"
        return [], report
    fam = tangent_section_at(model, P)
    a, b = fam.chart_point
    inv = _inverse_order(fam.order)
    points: list[ThreefoldPoint] = []
    for sec in fam.members(member_height):
        if report.members_used >= members_wanted or report.members_tried >= max_members:
            break
        report.members_tried += 1
        f = slice_sextic(model, fam, sec)
        try:
            curve = PlaneCurve(f)
            if curve.degree != 6 or not curve.reduced:
                _fail(report, sec.member, "slice is not a reduced sextic")
                continue
            m = multiplicity_at(curve, (a, b))
            if m != 2:
                _fail(report, sec.member, f"slice multiplicity {m} at P")
                continue
            if classify_singularity(curve, (a, b)).kind != "node_split":
                _fail(report, sec.member, "slice node is not split")
                continue
            fib = build_fibration(DoubleCoverSurface(curve), (a, b))
        except CurveError as exc:
            _fail(report, sec.member, str(exc))
            continue
        ms = find_multisections(fib, search_height, limit=1)
        if not ms:
            _fail(report, sec.member, f"no multisection below height {search_height}")
            continue
        pts, srep = generate_points(fib, ms[0], t_height, k_max, height_cap_bits, workers)
        if not pts:
            _fail(report, sec.member, "no surface points generated")
            continue
        report.members_used += 1
        srep_json = srep.to_json()["report"]
        srep_json["member"] = list(sec.member)
        report.surface_reports.append(srep_json)
        for p in pts:
            chart = (Fraction(1), p.x, p.y)
            x = tuple(chart[inv[i]] for i in range(3))
            z = sec.q(*x)
            if p.w * p.w != model.g(*x, z):
                raise AssertionError(f"threefold point off V1: {x}, {z}, {p.w}")
            points.append(ThreefoldPoint(x, z, p.w, sec.member, p.t, p.k))
    if not points:
        report.status = "all family members failed"
    report.points_emitted = len(points)
    report.vertical_fibers = len({_proj_key(pt.x) for pt in points})
    return points, report


def _proj_key(x):
    k = next(i for i in range(3) if x[i] != 0)
    return tuple(v / x[k] for v in x)
