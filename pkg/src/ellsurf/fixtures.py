"""Pinned inputs used by the tests, the CLI demo commands and the README."""
from __future__ import annotations

from fractions import Fraction

from .arith import Poly2
from .fano_v1 import Form, V1Model
from .plane_curves import PlaneCurve, ProjLine

x, y = Poly2.x(), Poly2.y()

# nodal sextic: the cubic y^2 = x^3 + 17 and three lines, two of them through the origin
NODAL_SEXTIC = (y * y - x ** 3 - 17) * (x - y) * (x + y) * (x - 5)
NODAL_BASE_POINT = (Fraction(0), Fraction(0))

# x^2 - y^2 + x^6 + y^6: split node at the origin but no small rational points elsewhere
QUARTIC_NODE_SEXTIC = x * x - y * y + x ** 6 + y ** 6

SIX_LINES_SQUARE = [(1, 0, 0), (1, 0, -1), (0, 1, 0), (0, 1, -1), (1, -1, 0), (1, 1, -1)]
SIX_LINES_GENERIC = [(1, 0, 0), (0, 1, 0), (1, 1, -1), (1, -2, 3), (2, 1, 5), (3, -1, -7)]


def nodal_curve() -> PlaneCurve:
    return PlaneCurve(NODAL_SEXTIC)


def six_lines(which: str = "generic") -> list[ProjLine]:
    data = SIX_LINES_GENERIC if which == "generic" else SIX_LINES_SQUARE
    return [ProjLine(*map(Fraction, t)) for t in data]


def _v1_factors():
    X0, X1, X2 = Form.var(0), Form.var(1), Form.var(2)
    A = -X0 * X0 - X0 * X1 - X0 * X2 - 2 * X1 * X1 + 2 * X1 * X2
    B = X0 * X0 - 2 * X0 * X1 - 2 * X0 * X2 - X1 * X1 - X1 * X2 - 2 * X2 * X2
    return A, B, -(A + B)


def v1_model() -> V1Model:
    """g = (z - A)(z - B)(z - C) with A + B + C = 0, so c = 1 and q2 = 0."""
    A, B, C = _v1_factors()
    return V1Model(Fraction(1), Form(), A * B + B * C + C * A, -(A * B * C))


def v1_point() -> tuple[Fraction, Fraction, Fraction, Fraction]:
    A, _, _ = _v1_factors()
    return (Fraction(1), Fraction(0), Fraction(0), A(1, 0, 0))
