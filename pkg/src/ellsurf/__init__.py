"""Rational points on double planes and the double Veronese cone, in exact arithmetic."""
from .arith import Poly1, Poly2, rational_roots, resultant, square_free_part
from .elliptic import ECPoint, QuarticModel, WeierstrassCurve, add, is_torsion, mul, quartic_to_weierstrass
from .fibration import (
    DoubleCoverSurface, build_fibration, fiber_at, find_multisections, generate_points,
    intersect_multisection_fiber,
)
from .plane_curves import (
    PlaneCurve, ProjLine, classify_singularity, intersection_profile, multiplicity_at,
    six_lines_analysis, tangent_pairs,
)

__version__ = "0.1.0"
