"""Weierstrass curves over Q, the chord-tangent law, and genus-one models.

Only short models ``y^2 = x^3 + A x + B`` are stored; long models and
quartic models ``v^2 = q(s)`` are reduced to them eagerly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .arith import Poly1, as_q, q_to_str, qsqrt, rational_roots

DEFAULT_HEIGHT_CAP_BITS = 100_000

# possible orders of rational torsion points (Mazur)
TORSION_ORDERS = (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12)


class EllipticError(ValueError):
    pass


class SingularCurve(EllipticError):
    pass


class NotOnCurve(EllipticError):
    pass


class HeightOverflow(EllipticError):
    pass


class DegenerateFiber(EllipticError):
    pass


@dataclass(frozen=True)
class ECPoint:
    x: Optional[Fraction] = None
    y: Optional[Fraction] = None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    @classmethod
    def affine(cls, x, y) -> "ECPoint":
        return cls(as_q(x), as_q(y))

    def to_json(self) -> dict:
        if self.is_infinity:
            return {"infinity": True}
        return {"x": q_to_str(self.x), "y": q_to_str(self.y)}

    @classmethod
    def from_json(cls, data: dict) -> "ECPoint":
        if data.get("infinity"):
            return INFINITY
        return cls.affine(data["x"], data["y"])


INFINITY = ECPoint()


@dataclass(frozen=True)
class WeierstrassCurve:
    """y^2 = x^3 + A x + B with nonzero discriminant."""

    A: Fraction
    B: Fraction
    height_cap_bits: int = field(default=DEFAULT_HEIGHT_CAP_BITS, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "A", as_q(self.A))
        object.__setattr__(self, "B", as_q(self.B))
        if self.discriminant == 0:
            raise SingularCurve(f"singular Weierstrass model A={self.A}, B={self.B}")

    @property
    def discriminant(self) -> Fraction:
        return -16 * (4 * self.A ** 3 + 27 * self.B ** 2)

    @property
    def j_invariant(self) -> Fraction:
        return -1728 * (4 * self.A) ** 3 / self.discriminant

    def contains(self, P: ECPoint) -> bool:
        if P.is_infinity:
            return True
        return P.y * P.y == P.x ** 3 + self.A * P.x + self.B

    def check(self, P: ECPoint) -> None:
        if not self.contains(P):
            raise NotOnCurve(f"{P} is not on {self}")

    def _cap(self, P: ECPoint) -> ECPoint:
        if not P.is_infinity:
            cap = self.height_cap_bits
            for c in (P.x, P.y):
                if c.numerator.bit_length() > cap or c.denominator.bit_length() > cap:
                    raise HeightOverflow(f"coordinate exceeds {cap} bits")
        return P

    def to_json(self) -> dict:
        return {"A": q_to_str(self.A), "B": q_to_str(self.B)}

    @classmethod
    def from_json(cls, data: dict) -> "WeierstrassCurve":
        return cls(as_q(data["A"]), as_q(data["B"]))

    def points_by_x(self, max_height: int):
        """Affine points with x of height <= max_height (slow, for tests)."""
        from .arith import qsqrt, rationals_by_height

        for x in rationals_by_height(max_height):
            r = qsqrt(x ** 3 + self.A * x + self.B)
            if r is not None:
                yield ECPoint(x, r)
                if r:
                    yield ECPoint(x, -r)


def neg(E: WeierstrassCurve, P: ECPoint) -> ECPoint:
    if P.is_infinity:
        return P
    return ECPoint(P.x, -P.y)


def _add(E: WeierstrassCurve, P: ECPoint, Q: ECPoint) -> ECPoint:
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    if P.x == Q.x:
        if P.y == -Q.y:
            return INFINITY
        lam = (3 * P.x * P.x + E.A) / (2 * P.y)
    else:
        lam = (Q.y - P.y) / (Q.x - P.x)
    x3 = lam * lam - P.x - Q.x
    y3 = lam * (P.x - x3) - P.y
    return E._cap(ECPoint(x3, y3))


def add(E: WeierstrassCurve, P: ECPoint, Q: ECPoint) -> ECPoint:
    E.check(P)
    E.check(Q)
    return _add(E, P, Q)


def sub(E: WeierstrassCurve, P: ECPoint, Q: ECPoint) -> ECPoint:
    return add(E, P, neg(E, Q))


def mul(E: WeierstrassCurve, n: int, P: ECPoint) -> ECPoint:
    E.check(P)
    if n < 0:
        return neg(E, mul(E, -n, P))
    result = INFINITY
    base = P
    while n:
        if n & 1:
            result = _add(E, result, base)
        n >>= 1
        if n:
            base = _add(E, base, base)
    return result


def is_torsion(E: WeierstrassCurve, P: ECPoint) -> tuple[bool, Optional[int]]:
    """Exact torsion test over Q.

    A rational point of finite order has order in TORSION_ORDERS, so if no
    such multiple vanishes the point has infinite order.
    """
    E.check(P)
    Q = P
    for k in range(1, max(TORSION_ORDERS) + 1):
        if Q.is_infinity:
            if k in TORSION_ORDERS:
                return True, k
        Q = _add(E, Q, P)
    return False, None


# --------------------------------------------------------------------------
# long Weierstrass models

@dataclass(frozen=True)
class LongToShort:
    """Coordinate change from y^2 + a1xy + a3y = x^3 + a2x^2 + a4x + a6."""

    a1: Fraction
    a3: Fraction
    x_shift: Fraction
    curve: WeierstrassCurve

    def forward(self, x, y) -> ECPoint:
        return ECPoint(x + self.x_shift, y + (self.a1 * x + self.a3) / 2)

    def backward(self, P: ECPoint) -> tuple[Fraction, Fraction]:
        x = P.x - self.x_shift
        return x, P.y - (self.a1 * x + self.a3) / 2


def long_to_short(a1, a2, a3, a4, a6, height_cap_bits=DEFAULT_HEIGHT_CAP_BITS) -> LongToShort:
    a1, a2, a3, a4, a6 = map(as_q, (a1, a2, a3, a4, a6))
    # complete the square: Y^2 = x^3 + al x^2 + be x + ga
    al = a2 + a1 * a1 / 4
    be = a4 + a1 * a3 / 2
    ga = a6 + a3 * a3 / 4
    # complete the cube
    shift = al / 3
    A = be - al * al / 3
    B = ga - al * be / 3 + 2 * al ** 3 / 27
    return LongToShort(a1, a3, shift, WeierstrassCurve(A, B, height_cap_bits))


# --------------------------------------------------------------------------
# quartic models v^2 = q(s)

@dataclass(frozen=True)
class QuarticModel:
    q: Poly1
    marked_point: Optional[tuple[Fraction, Fraction]] = None

    def __post_init__(self):
        if self.marked_point is not None:
            s0, v0 = map(as_q, self.marked_point)
            object.__setattr__(self, "marked_point", (s0, v0))
            if v0 * v0 != self.q(s0):
                raise NotOnCurve(f"marked point {self.marked_point} not on v^2 = {self.q}")

    @property
    def degenerate(self) -> bool:
        return self.q.degree not in (3, 4) or not self.q.is_square_free()

    def contains(self, s, v) -> bool:
        return v * v == self.q(s)

    def points_by_s(self, max_height: int):
        from .arith import qsqrt, rationals_by_height

        for s in rationals_by_height(max_height):
            r = qsqrt(self.q(s))
            if r is not None:
                yield (s, r)
                if r:
                    yield (s, -r)

    def to_json(self) -> dict:
        out = {"q": self.q.to_json()}
        if self.marked_point is not None:
            out["marked_point"] = [q_to_str(c) for c in self.marked_point]
        return out


@dataclass(frozen=True)
class ModelMap:
    """Birational maps between a marked quartic model and a short model.

    ``forward`` is defined on every affine point of the quartic; ``backward``
    returns None on the points of E coming from the quartic's points at
    infinity, which are listed in ``exceptional``.
    """

    quartic: QuarticModel
    ramified: bool
    coeffs: tuple[Fraction, ...]  # translated quartic a, b, c, d, e (u = s - s0)
    root: Fraction  # v0
    long: LongToShort
    exceptional: tuple[ECPoint, ...]

    @property
    def curve(self) -> WeierstrassCurve:
        return self.long.curve

    def _long_forward(self, u, v):
        a, b, c, d, e = self.coeffs
        if self.ramified:
            if u == 0:
                return None
            return d / u, d * v / (u * u)
        r = self.root
        if u == 0:
            if v == r:
                return None
            a1, a2, a3 = d / r, c - d * d / (4 * r * r), 2 * r * b
            return -a2, a1 * a2 - a3
        x = (2 * r * (v + r) + d * u) / (u * u)
        y = (4 * r * r * (v + r) + 2 * r * (d * u + c * u * u) - d * d * u * u / (2 * r)) / u ** 3
        return x, y

    def forward(self, s, v) -> ECPoint:
        s, v = as_q(s), as_q(v)
        if not self.quartic.contains(s, v):
            raise NotOnCurve(f"({s}, {v}) not on the quartic model")
        xy = self._long_forward(s - self.quartic.marked_point[0], v)
        if xy is None:
            return INFINITY
        return self.long.forward(*xy)

    def backward(self, P: ECPoint) -> Optional[tuple[Fraction, Fraction]]:
        self.curve.check(P)
        s0, v0 = self.quartic.marked_point
        if P.is_infinity:
            return s0, v0
        x, y = self.long.backward(P)
        a, b, c, d, e = self.coeffs
        u = v = None
        if self.ramified:
            if x == 0:
                return None
            u = d / x
            v = y * d / (x * x)
        else:
            r = self.root
            if y != 0:
                u = (2 * r * (x + c) - d * d / (2 * r)) / y
                v = -r + u * (u * x - d) / (2 * r)
        if u is not None and self.quartic.contains(s0 + u, v):
            if self.forward(s0 + u, v) == P:
                return s0 + u, v
        return self._backward_by_roots(P, x)

    def _backward_by_roots(self, P: ECPoint, x) -> Optional[tuple[Fraction, Fraction]]:
        # fallback where the closed form degenerates: 2r v = x u^2 - d u - 2r^2
        if self.ramified:
            return None
        a, b, c, d, e = self.coeffs
        r = self.root
        s0 = self.quartic.marked_point[0]
        vpoly = Poly1([-2 * r * r, -d, x]) * (1 / (2 * r))
        qt = Poly1([e, d, c, b, a])
        rel = vpoly * vpoly - qt
        if rel.is_zero():
            return None
        roots, _ = rational_roots(rel)
        for u, _m in roots:
            v = vpoly(u)
            if self.forward(s0 + u, v) == P:
                return s0 + u, v
        return None

    def to_json(self) -> dict:
        return {
            "curve": self.curve.to_json(),
            "ramified": self.ramified,
            "exceptional": [p.to_json() for p in self.exceptional],
        }


def quartic_to_weierstrass(C: QuarticModel, height_cap_bits: int = DEFAULT_HEIGHT_CAP_BITS):
    """Short Weierstrass model of a marked genus-one quartic.

    Returns ``(E, P0, maps)`` where P0 is the image of the marked point (the
    marked point is sent to the origin of E).
    """
    if C.marked_point is None:
        raise EllipticError("no rational point supplied")
    if C.degenerate:
        raise DegenerateFiber(f"degenerate fiber v^2 = {C.q}")
    s0, v0 = C.marked_point
    qt = C.q.shift(s0)
    e, d, c, b, a = (qt[k] for k in range(5))
    if v0 != 0:
        r = v0
        a1 = d / r
        a2 = c - d * d / (4 * r * r)
        a3 = 2 * r * b
        a4 = -4 * r * r * a
        a6 = a2 * a4
        ramified = False
    else:
        # q(s0 + u) = u (a u^3 + b u^2 + c u + d), d != 0 by square-freeness
        a1, a3 = Fraction(0), Fraction(0)
        a2, a4, a6 = c, b * d, a * d * d
        ramified = True
    long = long_to_short(a1, a2, a3, a4, a6, height_cap_bits)
    exceptional = _points_at_infinity(long, (a, b, c, d, e), v0, ramified)
    maps = ModelMap(C, ramified, (a, b, c, d, e), v0, long, exceptional)
    P0 = maps.forward(s0, v0)
    return long.curve, P0, maps


def _points_at_infinity(long, coeffs, v0, ramified) -> tuple[ECPoint, ...]:
    # images of the quartic's points over s = infinity (v ~ +-sqrt(a) u^2)
    a, b, c, d, e = coeffs
    sa = qsqrt(a)
    if sa is None or sa == 0:
        return ()
    if ramified:
        pts = {long.forward(Fraction(0), d * sgn) for sgn in (sa, -sa)}
    else:
        pts = {long.forward(2 * v0 * sgn, Fraction(0)) for sgn in (sa, -sa)}
    return tuple(sorted(pts, key=lambda p: (p.x, p.y)))


def jacobian_invariants(q: Poly1) -> WeierstrassCurve:
    """y^2 = x^3 - 27 I x - 27 J from the classical invariants of a quartic."""
    if q.degree > 4 or q.degree < 3 or not q.is_square_free():
        raise DegenerateFiber(f"degenerate quartic {q}")
    I, J = quartic_invariants(q)
    return WeierstrassCurve(-27 * I, -27 * J)


def quartic_invariants(q):
    """(I, J) of a s^4 + b s^3 + c s^2 + d s + e.

    Works for any coefficient ring supporting + and * (Fractions or Poly1).
    ``q`` may be a Poly1 or a sequence (e, d, c, b, a) low degree first.
    """
    e, d, c, b, a = (q[k] for k in range(5))
    I = 12 * a * e - 3 * b * d + c * c
    J = 72 * a * c * e + 9 * b * c * d - 27 * a * d * d - 27 * b * b * e - 2 * c * c * c
    return I, J


def quartic_discriminant(q):
    """Discriminant of the binary quartic form, (4 I^3 - J^2) / 27."""
    I, J = quartic_invariants(q)
    return (4 * I * I * I - J * J) * Fraction(1, 27)
