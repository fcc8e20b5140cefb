"""Elliptic fibrations on double planes w^2 = f6(x, y) and point generation.

Lines through a rational double point P of the branch sextic cut the double
cover in genus-one curves.  With P moved to the origin, the line of slope t
is (s, t*s) and f6(s, t*s) = s^2 * g4(s; t); the fiber is v^2 = g4(s; t)
with v = w / s.  The vertical line through P is the fiber t = None.

A multisection is the preimage of a line that meets f6 = 0 with a double
root at some point (a tangent line T_r, or a line through a second double
point).  Each fiber line crosses it once in the plane; when f6 is a square
there, the two lifts give a rational point class on the fiber, and the
group law spreads it into a whole family of surface points.
"""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Optional, Sequence

from .arith import Poly1, as_q, q_to_str, qsqrt, rationals_by_height
from .elliptic import (
    DEFAULT_HEIGHT_CAP_BITS, INFINITY, EllipticError, HeightOverflow, QuarticModel,
    _add, is_torsion, neg, quartic_discriminant, quartic_to_weierstrass,
)
from .plane_curves import (
    DegeneracyReport, PlaneCurve, Point, ProjLine, TangentPair,
    classify_singularity, multiplicity_at, point_height, point_to_json, rational_points,
    tangent_line, tangent_pairs,
)

log = logging.getLogger(__name__)


class FibrationError(ValueError):
    pass


@dataclass(frozen=True)
class DoubleCoverSurface:
    """w^2 = f6(x, y), branched along a reduced sextic."""

    branch: PlaneCurve

    def __post_init__(self):
        if self.branch.degree != 6:
            raise FibrationError(f"branch curve has degree {self.branch.degree}, expected 6")
        self.branch.require_reduced()

    def contains(self, x, y, w) -> bool:
        return w * w == self.branch(x, y)


def pencil_direction(t: Optional[Fraction]) -> Point:
    if t is None:
        return (Fraction(0), Fraction(1))
    return (Fraction(1), t)


@dataclass(frozen=True)
class EllipticFibration:
    surface: DoubleCoverSurface
    base_point: Point
    g4: tuple[Poly1, ...]  # coefficient of s^k as a polynomial in t, k = 0..4
    disc_t: Poly1
    node_kind: str

    @property
    def f(self):
        return self.surface.branch.f

    def fiber_quartic(self, t: Optional[Fraction]) -> Poly1:
        if t is None:
            px, py = self.base_point
            r = self.f.restrict(px, 0, py, 1)
            return Poly1(r.c[2:])
        return Poly1(c(t) for c in self.g4)

    def is_smooth(self, t: Optional[Fraction]) -> bool:
        if t is None:
            q = self.fiber_quartic(None)
            return q.degree == 4 and quartic_discriminant(q) != 0
        return self.disc_t(t) != 0

    def point_at(self, t: Optional[Fraction], s: Fraction) -> Point:
        dx, dy = pencil_direction(t)
        return (self.base_point[0] + s * dx, self.base_point[1] + s * dy)

    def coordinates_of(self, p: Point) -> tuple[Optional[Fraction], Fraction]:
        """(t, s) of a plane point other than the base point."""
        dx = p[0] - self.base_point[0]
        dy = p[1] - self.base_point[1]
        if dx == 0:
            if dy == 0:
                raise FibrationError("the base point lies on every fiber line")
            return None, dy
        return dy / dx, dx

    def pencil_line(self, t: Optional[Fraction]) -> ProjLine:
        return ProjLine.through_with_direction(self.base_point, pencil_direction(t))

    def to_json(self) -> dict:
        return {
            "base_point": point_to_json(self.base_point),
            "node_kind": self.node_kind,
            "g4": [c.to_json() for c in self.g4],
            "disc_t": self.disc_t.to_json(),
        }


def build_fibration(surface: DoubleCoverSurface, P: Sequence) -> EllipticFibration:
    P = (as_q(P[0]), as_q(P[1]))
    curve = surface.branch
    m = multiplicity_at(curve, P)
    if m >= 4:
        raise DegeneracyReport(
            "rational fibration",
            f"base point has multiplicity {m} >= 4; the pencil fibration is rational",
            point=point_to_json(P), multiplicity=m,
        )
    if m == 3:
        raise DegeneracyReport(
            "triple point",
            "base point has multiplicity 3; fibers are not genus one",
            point=point_to_json(P), multiplicity=m,
        )
    if m < 2:
        raise FibrationError(f"base point {point_to_json(P)} is not a double point (multiplicity {m})")
    kind = classify_singularity(curve, P).kind
    centered = curve.f.translate(*P)
    coeffs = [[Fraction(0)] * 7 for _ in range(5)]
    for (i, j), c in centered.terms.items():
        coeffs[i + j - 2][j] += c
    g4 = tuple(Poly1(c) for c in coeffs)
    disc_t = quartic_discriminant(g4) * g4[4]
    if disc_t.is_zero():
        raise FibrationError("every fiber of the pencil is singular")
    return EllipticFibration(surface, P, g4, disc_t, kind)


def fiber_at(fib: EllipticFibration, t: Optional[Fraction]) -> QuarticModel:
    """Quartic model of the fiber over t; check ``fib.is_smooth(t)`` before use."""
    return QuarticModel(fib.fiber_quartic(None if t is None else as_q(t)))


# --------------------------------------------------------------------------
# multisections

@dataclass(frozen=True)
class Multisection:
    """Preimage of a plane line along which f6 has a double root at ``center``.

    The model is v^2 = q(sigma) for the point center + sigma * direction,
    with w = sigma * v.
    """

    line: ProjLine
    center: Point
    direction: Point
    model: QuarticModel
    witness_t: Optional[Fraction]
    witness_point: tuple[Fraction, Fraction, Fraction]
    tangent_pair: Optional[TangentPair] = None
    kind: str = "tangent"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "line": self.line.to_json(),
            "center": point_to_json(self.center),
            "model": self.model.to_json(),
            "tangency_witness": {
                "t": None if self.witness_t is None else q_to_str(self.witness_t),
                "point": point_to_json(self.witness_point),
            },
            "tangent_pair": None if self.tangent_pair is None else self.tangent_pair.to_json(),
        }


def multisection_model(f, center: Point, direction: Point) -> Optional[QuarticModel]:
    """f restricted to the line, divided by the double root at center."""
    r = f.restrict(center[0], direction[0], center[1], direction[1])
    if r.is_zero() or r[0] != 0 or r[1] != 0:
        return None
    return QuarticModel(Poly1(r.c[2:]))


def _accept_tangent_pair(fib: EllipticFibration, pair: TangentPair) -> Optional[Multisection]:
    P = fib.base_point
    T = pair.tangent_line
    r, rp = pair.r, pair.r_prime
    # (i) T_r != L_{P,r'}, i.e. P is not on T_r
    if T.contains(P):
        return None
    # (i)+(iii) L_{P,r'} transversal to T_{r'}: the tangent at r' misses P
    T2 = tangent_line(fib.surface.branch, rp)
    if T2 == T or T2.contains(P):
        return None
    # (ii) the fiber through r' is smooth
    t0, _s0 = fib.coordinates_of(rp)
    if not fib.is_smooth(t0):
        return None
    # (iv) the multisection is a smooth genus-one curve
    (x0, y0), direction = T.parametrization()
    model = multisection_model(fib.f, r, direction)
    if model is None or model.degenerate:
        return None
    return Multisection(
        line=T, center=r, direction=direction, model=model, witness_t=t0,
        witness_point=(rp[0], rp[1], Fraction(0)), tangent_pair=pair, kind="tangent",
    )


def find_multisections(fib: EllipticFibration, search_height: int,
                       limit: Optional[int] = None) -> list[Multisection]:
    """Saliently ramified multisections from tangent lines at rational points.

    Sorted by height of r, then of r'.  ``limit`` stops after that many
    points r have produced at least one multisection.
    """
    curve = fib.surface.branch
    P = fib.base_point
    pencil = [fib.pencil_line(t) for t in rationals_by_height(min(search_height, 12))]
    pencil.append(fib.pencil_line(None))
    found: list[Multisection] = []
    productive = 0
    for r in rational_points(curve, search_height, extra_lines=pencil):
        if r == P or multiplicity_at(curve, r) != 1:
            continue
        pairs = sorted(tangent_pairs(curve, r), key=lambda p: (point_height(p.r_prime), p.r_prime))
        hits = [m for m in (_accept_tangent_pair(fib, pair) for pair in pairs) if m is not None]
        if hits:
            found.extend(hits)
            productive += 1
            if limit is not None and productive >= limit:
                break
    found.sort(key=lambda m: (point_height(m.center), m.center,
                              point_height(m.witness_point[:2]), m.witness_point))
    return found


# --------------------------------------------------------------------------
# generation

@dataclass(frozen=True)
class FiberLift:
    s: Fraction
    v: Fraction
    point: tuple[Fraction, Fraction, Fraction]


def intersect_multisection_fiber(m: Multisection, fib: EllipticFibration,
                                 t: Optional[Fraction]) -> list[FiberLift]:
    """Rational lifts of the plane point where the multisection line crosses fiber line t."""
    a, b, c = m.line.coeffs
    P = fib.base_point
    ux, uy = pencil_direction(t)
    num = a * P[0] + b * P[1] + c
    den = a * ux + b * uy
    if den == 0:
        if num == 0:
            raise FibrationError("multisection contains fiber direction")
        return []
    s = -num / den
    if s == 0:
        return []
    x, y = fib.point_at(t, s)
    w = qsqrt(fib.f(x, y))
    if w is None:
        return []
    if w == 0:
        return [FiberLift(s, Fraction(0), (x, y, Fraction(0)))]
    return [FiberLift(s, w / s, (x, y, w)), FiberLift(s, -w / s, (x, y, -w))]


@dataclass(frozen=True)
class GeneratedPoint:
    t: Fraction
    k: int
    x: Fraction
    y: Fraction
    w: Fraction
    provenance: dict = field(default_factory=dict, compare=False, hash=False)

    def to_json(self) -> dict:
        return {
            "t": q_to_str(self.t),
            "k": self.k,
            "x": q_to_str(self.x),
            "y": q_to_str(self.y),
            "w": q_to_str(self.w),
            "provenance": self.provenance,
        }


@dataclass
class GenerationReport:
    t_height: int
    k_max: int
    fibers_visited: int = 0
    degenerate_fibers: int = 0
    fibers_with_lifts: int = 0
    nontorsion_fibers: int = 0
    torsion_only_fibers: int = 0
    ramified_fibers: int = 0
    overflow_fibers: int = 0
    skipped_points: int = 0
    points_emitted: int = 0
    torsion_orders: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = dict(self.__dict__)
        out["torsion_orders"] = {str(k): v for k, v in sorted(self.torsion_orders.items())}
        return {"report": out}


@dataclass(frozen=True)
class _FiberResult:
    t: Fraction
    status: str
    points: tuple[tuple[int, Fraction, Fraction, Fraction], ...] = ()
    skipped: int = 0
    order: Optional[int] = None


def _multiple_order(k_max: int):
    # j = k-1 and j = -k are conjugate lifts of the same plane point
    for k in range(1, k_max + 1):
        yield k - 1
        yield -k


def _process_fiber(fib: EllipticFibration, m: Multisection, t: Fraction, k_max: int,
                   height_cap_bits: int) -> _FiberResult:
    if not fib.is_smooth(t):
        return _FiberResult(t, "degenerate")
    try:
        lifts = intersect_multisection_fiber(m, fib, t)
    except FibrationError:
        return _FiberResult(t, "direction")
    if not lifts:
        return _FiberResult(t, "no_lift")
    if len(lifts) == 1:
        x, y, w = lifts[0].point
        return _FiberResult(t, "ramified", ((0, x, y, w),), order=1)
    top = lifts[0]
    try:
        E, P0, maps = quartic_to_weierstrass(
            QuarticModel(fib.fiber_quartic(t), (top.s, top.v)), height_cap_bits)
        conj = maps.forward(top.s, -top.v)
        # marked lift goes to the origin, so the difference class is -conj
        D = neg(E, conj)
        torsion, order = is_torsion(E, D)
        js = list(_multiple_order(1 if torsion else k_max))
        out = []
        skipped = 0
        pos, negp = INFINITY, neg(E, D)
        cache = {0: pos, -1: negp}
        for j in js:
            if j not in cache:
                if j > 0:
                    cache[j] = _add(E, cache[j - 1], D)
                else:
                    cache[j] = _add(E, cache[j + 1], negp)
            sv = maps.backward(cache[j])
            if sv is None or sv[0] == 0:
                skipped += 1
                continue
            s, v = sv
            x, y = fib.point_at(t, s)
            out.append((j, x, y, s * v))
    except HeightOverflow:
        return _FiberResult(t, "overflow")
    except EllipticError as exc:  # pragma: no cover - smooth fibers never hit this
        log.warning("fiber t=%s skipped: %s", t, exc)
        return _FiberResult(t, "degenerate")
    return _FiberResult(t, "torsion" if torsion else "nontorsion", tuple(out), skipped, order)


def _verify_fiber_points(fib: EllipticFibration, res: _FiberResult) -> None:
    seen = set()
    line = fib.pencil_line(res.t)
    for j, x, y, w in res.points:
        if w * w != fib.f(x, y):
            raise AssertionError(f"generated point off the surface: t={res.t} k={j}")
        if not line.contains((x, y)):
            raise AssertionError(f"generated point off its pencil line: t={res.t} k={j}")
        if (x, y, w) in seen:
            raise AssertionError(f"repeated point in fiber t={res.t}")
        seen.add((x, y, w))


def generate_points(fib: EllipticFibration, m: Multisection, t_height: int, k_max: int,
                    height_cap_bits: int = DEFAULT_HEIGHT_CAP_BITS, workers: int = 1,
                    provenance: Optional[dict] = None):
    """Surface points from fibers t of height <= t_height, in enumeration order.

    Every fiber with a rational lift emits its lifts; fibers whose
    difference class has infinite order also emit the multiples
    j * D for -k_max <= j < k_max.  Returns (points, report).
    """
    report = GenerationReport(t_height, k_max)
    if t_height <= 0 or k_max <= 0:
        return [], report
    ts = list(rationals_by_height(t_height))
    task = partial(_process_fiber, fib, m, k_max=k_max, height_cap_bits=height_cap_bits)
    if workers > 1 and len(ts) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(task, ts, chunksize=max(1, len(ts) // (4 * workers))))
    else:
        results = [task(t) for t in ts]
    base = provenance if provenance is not None else default_provenance(fib, m)
    points: list[GeneratedPoint] = []
    for res in results:
        report.fibers_visited += 1
        st = res.status
        if st in ("degenerate", "direction"):
            report.degenerate_fibers += 1
            continue
        if st == "no_lift":
            continue
        if st == "overflow":
            report.fibers_with_lifts += 1
            report.overflow_fibers += 1
            continue
        report.fibers_with_lifts += 1
        if st == "nontorsion":
            report.nontorsion_fibers += 1
        else:
            report.torsion_only_fibers += 1
            if st == "ramified":
                report.ramified_fibers += 1
            report.torsion_orders[res.order] = report.torsion_orders.get(res.order, 0) + 1
        report.skipped_points += res.skipped
        _verify_fiber_points(fib, res)
        for j, x, y, w in res.points:
            points.append(GeneratedPoint(res.t, j, x, y, w, base))
    report.points_emitted = len(points)
    return points, report


def default_provenance(fib: EllipticFibration, m: Multisection) -> dict:
    return {
        "base_point": point_to_json(fib.base_point),
        "multisection": m.kind,
        "line": m.line.to_json(),
        "center": point_to_json(m.center),
    }
