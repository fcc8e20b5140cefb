from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from ellsurf import fixtures
from ellsurf.arith import Poly1, Poly2, rational_roots
from ellsurf.elliptic import INFINITY, QuarticModel, is_torsion, neg, quartic_to_weierstrass
from ellsurf.fibration import (
    DoubleCoverSurface, FibrationError, Multisection, build_fibration, fiber_at,
    find_multisections, generate_points, intersect_multisection_fiber, multisection_model,
)
from ellsurf.plane_curves import DegeneracyReport, PlaneCurve, ProjLine, intersection_profile

from oracles import S, X, Y, frac, to_sympy2

F = Fraction
x, y = Poly2.x(), Poly2.y()
T = sp.Symbol("t")


def test_g4_of_quartic_node(quartic_node_fib):
    fib = quartic_node_fib
    g4 = [c.to_json() for c in fib.g4]
    # (1 - t^2) + (1 + t^6) s^4
    assert fib.g4[0] == Poly1([1, 0, -1]) and fib.g4[4] == Poly1([1, 0, 0, 0, 0, 0, 1])
    assert all(c.is_zero() for c in fib.g4[1:4]), g4
    assert fib.node_kind == "node_split"


def test_fiber_examples(quartic_node_fib):
    fib = quartic_node_fib
    s = Poly1.x()
    assert fiber_at(fib, 0).q == s ** 4 + 1 and fib.is_smooth(F(0))
    assert fiber_at(fib, 1).q == 2 * s ** 4 and not fib.is_smooth(F(1))
    assert fiber_at(fib, 2).q == 65 * s ** 4 - 3 and fib.is_smooth(F(2))


def test_disc_t_against_oracle(quartic_node_fib):
    g = (1 + T ** 6) * S ** 4 + (1 - T * T)
    ref = sp.Poly(sp.expand(sp.discriminant(g, S) * (1 + T ** 6)), T)
    assert [frac(c) for c in reversed(ref.all_coeffs())] == list(quartic_node_fib.disc_t.c)
    roots, _ = rational_roots(quartic_node_fib.disc_t)
    assert [r for r, _ in roots] == [-1, 1]


@settings(max_examples=30, deadline=None)
@given(st.fractions(min_value=-5, max_value=5, max_denominator=4))
def test_pencil_substitution_identity(nodal_fib, t):
    # f(P + (s, t s)) == s^2 * g4(s; t), checked in sympy
    fib = nodal_fib
    px, py = fib.base_point
    lhs = sp.expand(to_sympy2(fib.f).subs({X: px + S, Y: py + sp.Rational(t.numerator, t.denominator) * S},
                                          simultaneous=True))
    g4 = fib.fiber_quartic(t)
    rhs = sp.expand(S ** 2 * sum(sp.Rational(c.numerator, c.denominator) * S ** i for i, c in enumerate(g4.c)))
    assert sp.expand(lhs - rhs) == 0


@settings(max_examples=40, deadline=None)
@given(st.fractions(min_value=-6, max_value=6, max_denominator=6))
def test_smooth_fibers_are_square_free(nodal_fib, t):
    if nodal_fib.is_smooth(t):
        assert not QuarticModel(nodal_fib.fiber_quartic(t)).degenerate


def test_zero_fiber_class_is_torsion():
    s = Poly1.x()
    E, _, maps = quartic_to_weierstrass(QuarticModel(s ** 4 + 1, (0, 1)))
    D = neg(E, maps.forward(0, -1))
    assert D != INFINITY and is_torsion(E, D)[0]


# -- degeneracies -------------------------------------------------------------------

def test_multiplicity_four_is_rational():
    surf = DoubleCoverSurface(PlaneCurve(x ** 4 - y ** 4 + x ** 6 + 2 * y ** 6))
    with pytest.raises(DegeneracyReport) as exc:
        build_fibration(surf, (0, 0))
    assert exc.value.kind == "rational fibration"


def test_multiplicity_three_refused():
    surf = DoubleCoverSurface(PlaneCurve(x ** 3 - y ** 3 + x ** 6 + y ** 6))
    with pytest.raises(DegeneracyReport) as exc:
        build_fibration(surf, (0, 0))
    assert exc.value.kind == "triple point"


def test_non_reduced_branch_refused():
    with pytest.raises(DegeneracyReport):
        DoubleCoverSurface(PlaneCurve((x - y) ** 2 * (x ** 4 + y ** 4 - 1)))


def test_smooth_base_point_refused():
    surf = DoubleCoverSurface(fixtures.nodal_curve())
    with pytest.raises(FibrationError):
        build_fibration(surf, (5, 0))


def test_branch_degree_checked():
    with pytest.raises(FibrationError):
        DoubleCoverSurface(PlaneCurve(x ** 4 + y ** 4 - 1))


# -- multisections ----------------------------------------------------------------------

def test_nodal_multisections_are_salient(nodal_fib, nodal_multisections):
    assert nodal_multisections
    curve = nodal_fib.surface.branch
    for m in nodal_multisections:
        assert m.witness_t is None or nodal_fib.disc_t(m.witness_t) != 0
        assert nodal_fib.is_smooth(m.witness_t)
        rp = m.witness_point[:2]
        assert curve.contains(rp) and m.witness_point[2] == 0
        assert nodal_fib.pencil_line(m.witness_t).contains(rp)
        # the tangent line meets R doubly at r and simply at r'
        prof = intersection_profile(curve, m.line)
        assert prof.multiplicity_of(m.center) >= 2 and prof.multiplicity_of(rp) == 1
        assert not m.model.degenerate
        assert m.model == multisection_model(nodal_fib.f, m.center, m.direction)


def test_multisection_ordering_is_by_height(nodal_multisections):
    from ellsurf.plane_curves import point_height

    hs = [point_height(m.center) for m in nodal_multisections]
    assert hs == sorted(hs)


def test_search_height_twenty_finds_one(nodal_fib):
    assert find_multisections(nodal_fib, 20, limit=1)


def _manual(line_coeffs, center):
    line = ProjLine(*map(F, line_coeffs))
    _, d = line.parametrization()
    return Multisection(line, center, d, QuarticModel(Poly1([1, 0, 0, 0, 1])), F(0), (F(0), F(0), F(0)))


def test_intersect_parallel(quartic_node_fib):
    m = _manual((1, -1, 1), (F(0), F(1)))
    assert intersect_multisection_fiber(m, quartic_node_fib, F(1)) == []


def test_intersect_on_branch_gives_one_point(nodal_fib):
    m = _manual((1, 0, -5), (F(5), F(5)))
    lifts = intersect_multisection_fiber(m, nodal_fib, F(2))
    assert len(lifts) == 1 and lifts[0].point == (5, 10, 0)


def test_intersect_non_square(quartic_node_fib):
    m = _manual((1, 0, -1), (F(1), F(0)))
    # f(1, 0) = 2
    assert intersect_multisection_fiber(m, quartic_node_fib, F(0)) == []


def test_intersect_square_gives_conjugates(nodal_fib, nodal_multisections, nodal_run):
    m = nodal_multisections[0]
    ts = sorted({p.t for p in nodal_run[0]}, key=lambda t: (abs(t.numerator), t.denominator))
    pairs = [intersect_multisection_fiber(m, nodal_fib, t) for t in ts]
    pairs = [(t, l) for t, l in zip(ts, pairs) if len(l) == 2]
    assert pairs
    for t, (a, b) in pairs:
        assert a.point[:2] == b.point[:2] and a.point[2] == -b.point[2] != 0
        assert m.line.contains(a.point[:2]) and nodal_fib.pencil_line(t).contains(a.point[:2])


def test_intersect_fiber_direction_raises(nodal_fib):
    m = _manual((0, 1, 0), (F(1), F(0)))
    with pytest.raises(FibrationError, match="fiber direction"):
        intersect_multisection_fiber(m, nodal_fib, F(0))


# -- generation ---------------------------------------------------------------------

def test_every_point_on_surface_and_line(nodal_fib, nodal_run):
    points, report = nodal_run
    assert points and report.points_emitted == len(points)
    for p in points:
        assert p.w * p.w == nodal_fib.f(p.x, p.y)
        assert nodal_fib.pencil_line(p.t).contains((p.x, p.y))


def test_points_distinct_within_fiber(nodal_run):
    points, _ = nodal_run
    by_t = {}
    for p in points:
        by_t.setdefault(p.t, []).append((p.x, p.y, p.w))
    for pts in by_t.values():
        assert len(pts) == len(set(pts))


def test_report_counts_consistent(nodal_run):
    _, r = nodal_run
    assert r.fibers_with_lifts == r.nontorsion_fibers + r.torsion_only_fibers + r.overflow_fibers
    assert r.fibers_visited >= r.fibers_with_lifts + r.degenerate_fibers
    assert sum(r.torsion_orders.values()) == r.torsion_only_fibers


def test_k_max_one_is_intersection_lifts(nodal_fib, nodal_multisections):
    m = nodal_multisections[0]
    points, _ = generate_points(nodal_fib, m, 20, 1)
    expected = []
    from ellsurf.arith import rationals_by_height

    for t in rationals_by_height(20):
        if not nodal_fib.is_smooth(t):
            continue
        expected.extend((t, l.point) for l in intersect_multisection_fiber(m, nodal_fib, t))
    assert [(p.t, (p.x, p.y, p.w)) for p in points] == expected


def test_monotone_in_caps(nodal_fib, nodal_multisections):
    m = nodal_multisections[0]
    small = {(p.t, p.x, p.y, p.w) for p in generate_points(nodal_fib, m, 15, 3)[0]}
    bigger_t = {(p.t, p.x, p.y, p.w) for p in generate_points(nodal_fib, m, 25, 3)[0]}
    bigger_k = {(p.t, p.x, p.y, p.w) for p in generate_points(nodal_fib, m, 15, 5)[0]}
    assert small <= bigger_t and small <= bigger_k


def test_zero_caps_emit_nothing(nodal_fib, nodal_multisections):
    pts, rep = generate_points(nodal_fib, nodal_multisections[0], 0, 8)
    assert pts == [] and rep.fibers_visited == 0


def test_parallel_matches_serial(nodal_fib, nodal_multisections):
    m = nodal_multisections[0]
    a = generate_points(nodal_fib, m, 20, 4, workers=1)
    b = generate_points(nodal_fib, m, 20, 4, workers=2)
    assert [p.to_json() for p in a[0]] == [p.to_json() for p in b[0]]
    assert a[1].to_json() == b[1].to_json()
