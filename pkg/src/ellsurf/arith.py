"""Exact scalar and polynomial arithmetic over the rationals.

Scalars are :class:`fractions.Fraction`.  ``Poly1`` is a dense univariate
polynomial, ``Poly2`` a sparse bivariate one.  Nothing in here touches
floating point.
"""
from __future__ import annotations

import math
from fractions import Fraction
from itertools import zip_longest
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Fraction", "Poly1", "Poly2", "ArithmeticError_", "as_q", "height",
    "is_square", "qsqrt", "resultant", "discriminant", "rational_roots",
    "square_free_part", "poly2_gcd", "resultant_y", "rationals_by_height",
    "q_to_str", "q_from_str",
]


class ArithmeticError_(ValueError):
    """Raised for undefined operations (zero resultants, zero polynomials)."""


def as_q(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return q_from_str(value)
    return Fraction(value)


def height(q: Fraction) -> int:
    return max(abs(q.numerator), q.denominator)


def is_square(q: Fraction) -> bool:
    return qsqrt(q) is not None


def qsqrt(q: Fraction) -> Fraction | None:
    """Exact rational square root, or None if ``q`` is not a square."""
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def q_to_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def q_from_str(s: str) -> Fraction:
    s = s.strip()
    if "/" in s:
        n, d = s.split("/")
        if int(d) == 0:
            raise ValueError(f"zero denominator in {s!r}")
        return Fraction(int(n), int(d))
    return Fraction(int(s))


def rationals_by_height(max_height: int) -> Iterator[Fraction]:
    """All rationals p/q with max(|p|, q) <= max_height.

    Ordered by height, ties by denominator, then numerator.
    """
    for h in range(1, max_height + 1):
        batch = []
        for q in range(1, h + 1):
            for p in range(-h, h + 1):
                if max(abs(p), q) == h and math.gcd(p, q) == 1:
                    batch.append((q, p))
        batch.sort()
        for q, p in batch:
            yield Fraction(p, q)


# --------------------------------------------------------------------------
# univariate

class Poly1:
    """Dense univariate polynomial, coefficients low degree first."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable = ()):
        c = [as_q(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.c: tuple[Fraction, ...] = tuple(c)

    @classmethod
    def const(cls, a) -> "Poly1":
        return cls([a])

    @classmethod
    def x(cls) -> "Poly1":
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "Poly1":
        p = cls([1])
        for r in roots:
            p = p * cls([-as_q(r), 1])
        return p

    @property
    def degree(self) -> int:
        # -1 stands in for -infinity on the zero polynomial
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    @property
    def lead(self) -> Fraction:
        return self.c[-1] if self.c else Fraction(0)

    def __getitem__(self, k: int) -> Fraction:
        return self.c[k] if 0 <= k < len(self.c) else Fraction(0)

    def __iter__(self):
        return iter(self.c)

    def __len__(self):
        return len(self.c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly1):
            if isinstance(other, (int, Fraction)):
                other = Poly1([other])
            else:
                return NotImplemented
        return self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __repr__(self) -> str:
        if not self.c:
            return "Poly1(0)"
        terms = []
        for k in range(len(self.c) - 1, -1, -1):
            a = self.c[k]
            if a:
                terms.append(f"{a}" + ("" if k == 0 else "*s" if k == 1 else f"*s^{k}"))
        return "Poly1(" + " + ".join(terms) + ")"

    def _coerce(self, other) -> "Poly1":
        if isinstance(other, Poly1):
            return other
        return Poly1([other])

    def __add__(self, other):
        o = self._coerce(other)
        return Poly1(a + b for a, b in zip_longest(self.c, o.c, fillvalue=Fraction(0)))

    __radd__ = __add__

    def __neg__(self):
        return Poly1(-a for a in self.c)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly1):
            o = as_q(other)
            return Poly1(a * o for a in self.c)
        if not self.c or not other.c:
            return Poly1()
        out = [Fraction(0)] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(other.c):
                    out[i + j] += a * b
        return Poly1(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Poly1([1])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, other):
        # exact division only
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError_("inexact polynomial division")
        return q

    def __divmod__(self, other):
        o = self._coerce(other)
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.c)
        dq = o.degree
        if len(rem) - 1 < dq:
            return Poly1(), self
        quo = [Fraction(0)] * (len(rem) - dq)
        inv = 1 / o.lead
        for k in range(len(rem) - 1, dq - 1, -1):
            coef = rem[k] * inv
            quo[k - dq] = coef
            if coef:
                for j, b in enumerate(o.c):
                    rem[k - dq + j] -= coef * b
        return Poly1(quo), Poly1(rem[:dq])

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __call__(self, x):
        acc = 0 * x if not isinstance(x, Fraction) else Fraction(0)
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def deriv(self) -> "Poly1":
        return Poly1(k * a for k, a in enumerate(self.c) if k)

    def monic(self) -> "Poly1":
        if not self.c:
            return self
        return self * (1 / self.lead)

    def shift(self, a) -> "Poly1":
        """p(s + a)."""
        a = as_q(a)
        out = Poly1()
        lin = Poly1([a, 1])
        for coef in reversed(self.c):
            out = out * lin + coef
        return out

    def scale_var(self, lam) -> "Poly1":
        """p(lam * s)."""
        lam = as_q(lam)
        return Poly1(a * lam ** k for k, a in enumerate(self.c))

    def compose(self, other: "Poly1") -> "Poly1":
        out = Poly1()
        for coef in reversed(self.c):
            out = out * other + coef
        return out

    def gcd(self, other: "Poly1") -> "Poly1":
        a, b = self, self._coerce(other)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def is_square_free(self) -> bool:
        if self.degree <= 0:
            return True
        return self.gcd(self.deriv()).degree == 0

    def integer_primitive(self) -> list[int]:
        """Integer coefficient list proportional to self, content removed."""
        den = 1
        for a in self.c:
            den = den * a.denominator // math.gcd(den, a.denominator)
        ints = [int(a * den) for a in self.c]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        g = g or 1
        if ints and ints[-1] < 0:
            g = -g
        return [v // g for v in ints]

    def to_json(self) -> list[str]:
        return [q_to_str(a) for a in self.c]


def resultant(f: Poly1, g: Poly1):
    """Sylvester resultant of two univariate polynomials.

    res(f, c) = c^deg(f) for a nonzero constant c.
    """
    if f.is_zero() and g.is_zero():
        raise ArithmeticError_("undefined resultant")
    if f.is_zero() or g.is_zero():
        return Fraction(0)
    m, n = f.degree, g.degree
    if m == 0 and n == 0:
        return Fraction(1)
    if n == 0:
        return g.lead ** m
    if m == 0:
        return f.lead ** n
    return _det(_sylvester(f.c, g.c, m, n))


def _sylvester(fc, gc, m, n):
    size = m + n
    rows = []
    for i in range(n):
        row = [Fraction(0)] * size
        for k in range(m + 1):
            row[i + k] = fc[m - k]
        rows.append(row)
    for i in range(m):
        row = [Fraction(0)] * size
        for k in range(n + 1):
            row[i + k] = gc[n - k]
        rows.append(row)
    return rows


def _det(rows):
    a = [list(r) for r in rows]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        p = a[col][col]
        det *= p
        for r in range(col + 1, n):
            if a[r][col]:
                factor = a[r][col] / p
                row, prow = a[r], a[col]
                for k in range(col, n):
                    row[k] -= factor * prow[k]
    return det


def discriminant(f: Poly1) -> Fraction:
    """disc(f) = (-1)^(n(n-1)/2) res(f, f') / lead(f)."""
    n = f.degree
    if n < 1:
        raise ArithmeticError_("discriminant of a constant")
    if n == 1:
        return Fraction(1)
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(f, f.deriv()) / f.lead


# -- exact rational roots via Sturm isolation -------------------------------

_SIEVE_PRIMES = (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def _has_root_mod(ints: list[int], p: int) -> bool:
    c = [a % p for a in ints]
    for r in range(p):
        acc = 0
        for a in reversed(c):
            acc = (acc * r + a) % p
        if acc == 0:
            return True
    return False


def _sign_at(ints: list[int], num: int, den: int) -> int:
    # sign of p(num/den) * den^n, den > 0, in integer arithmetic
    acc = ints[-1]
    dpow = 1
    for a in reversed(ints[:-1]):
        dpow *= den
        acc = acc * num + a * dpow
    return (acc > 0) - (acc < 0)


def _sturm_chain(p: Poly1) -> list[list[int]]:
    chain = [p, p.deriv()]
    while chain[-1].degree > 0:
        r = -(chain[-2] % chain[-1])
        if r.is_zero():
            break
        chain.append(r)
    # positive rescaling keeps signs
    out = []
    for q in chain:
        ints = q.integer_primitive()
        if (q.lead > 0) != (ints[-1] > 0):
            ints = [-v for v in ints]
        out.append(ints)
    return out


def _sign_changes(chain, x: Fraction) -> int:
    count, last = 0, 0
    n, d = x.numerator, x.denominator
    for ints in chain:
        s = _sign_at(ints, n, d)
        if s:
            if last and s != last:
                count += 1
            last = s
    return count


def _isolate(chain, lo, hi, n_lo, n_hi, out):
    # distinct real roots in (lo, hi]
    k = n_lo - n_hi
    if k == 0:
        return
    if k == 1:
        out.append((lo, hi))
        return
    mid = (lo + hi) / 2
    n_mid = _sign_changes(chain, mid)
    _isolate(chain, lo, mid, n_lo, n_mid, out)
    _isolate(chain, mid, hi, n_mid, n_hi, out)


def _rational_roots_squarefree(p: Poly1) -> list[Fraction]:
    ints = p.integer_primitive()
    if len(ints) <= 1:
        return []
    if len(ints) == 2:
        return [Fraction(-ints[0], ints[1])]
    if len(ints) == 3:
        a, b, c = ints[2], ints[1], ints[0]
        disc = b * b - 4 * a * c
        if disc < 0:
            return []
        r = math.isqrt(disc)
        if r * r != disc:
            return []
        return sorted({Fraction(-b - r, 2 * a), Fraction(-b + r, 2 * a)})
    roots: list[Fraction] = []
    if ints[0] == 0:
        roots.append(Fraction(0))
        k = next(i for i, v in enumerate(ints) if v)
        ints = ints[k:]
        if len(ints) <= 3:
            return sorted(roots + _rational_roots_squarefree(Poly1(ints)))
    lead = abs(ints[-1])
    # a rational root a/b has b | lead, so it reduces to a root mod any p not dividing lead
    for prime in _SIEVE_PRIMES:
        if lead % prime and not _has_root_mod(ints, prime):
            return roots
    chain = _sturm_chain(Poly1(ints))
    bound = Fraction(1 + max(abs(v) for v in ints[:-1]), 1) / lead + 1
    bound = Fraction(math.ceil(bound))
    lo, hi = -bound, bound
    intervals: list[tuple[Fraction, Fraction]] = []
    _isolate(chain, lo, hi, _sign_changes(chain, lo), _sign_changes(chain, hi), intervals)
    # two rationals with denominators <= lead differ by >= 1/lead^2
    tol = Fraction(1, 2 * lead * lead)
    for a, b in intervals:
        if _sign_at(ints, b.numerator, b.denominator) == 0:
            roots.append(b)
            continue
        # a may itself be a root (excluded from the half-open interval), so track b
        sb = _sign_at(ints, b.numerator, b.denominator)
        while b - a >= tol:
            mid = (a + b) / 2
            sm = _sign_at(ints, mid.numerator, mid.denominator)
            if sm == 0:
                a = b = mid
                break
            if sm == sb:
                b = mid
            else:
                a = mid
        cand = ((a + b) / 2).limit_denominator(lead)
        if a <= cand <= b and _sign_at(ints, cand.numerator, cand.denominator) == 0:
            roots.append(cand)
    return sorted(set(roots))


def rational_roots(f: Poly1) -> tuple[list[tuple[Fraction, int]], int]:
    """Rational roots of ``f`` with multiplicities, and the cofactor degree.

    The cofactor is what remains after dividing out every rational root.
    """
    if f.is_zero():
        raise ArithmeticError_("rational roots of the zero polynomial")
    if f.degree <= 0:
        return [], 0
    g = f.gcd(f.deriv())
    sqf = f / g if g.degree > 0 else f
    out = []
    rest = f
    for r in _rational_roots_squarefree(sqf):
        lin = Poly1([-r, 1])
        m = 0
        while True:
            q, rem = divmod(rest, lin)
            if not rem.is_zero():
                break
            rest = q
            m += 1
        out.append((r, m))
    return out, rest.degree


# --------------------------------------------------------------------------
# bivariate

class Poly2:
    """Sparse bivariate polynomial {(i, j): c} for c * x^i * y^j."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        d: dict[tuple[int, int], Fraction] = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for key, c in items:
                c = as_q(c)
                if c:
                    k = (int(key[0]), int(key[1]))
                    v = d.get(k, Fraction(0)) + c
                    if v:
                        d[k] = v
                    else:
                        d.pop(k, None)
        self.terms = d

    @classmethod
    def from_list(cls, triples: Iterable[Sequence]) -> "Poly2":
        return cls(((t[0], t[1]), t[2]) for t in triples)

    @classmethod
    def x(cls) -> "Poly2":
        return cls({(1, 0): 1})

    @classmethod
    def y(cls) -> "Poly2":
        return cls({(0, 1): 1})

    @classmethod
    def const(cls, c) -> "Poly2":
        return cls({(0, 0): c})

    @classmethod
    def linear(cls, a, b, c) -> "Poly2":
        """a*x + b*y + c."""
        return cls({(1, 0): a, (0, 1): b, (0, 0): c})

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def total_degree(self) -> int:
        return max((i + j for i, j in self.terms), default=-1)

    def deg_x(self) -> int:
        return max((i for i, _ in self.terms), default=-1)

    def deg_y(self) -> int:
        return max((j for _, j in self.terms), default=-1)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly2.const(other)
        if not isinstance(other, Poly2):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"Poly2({self.to_json()})"

    def _coerce(self, other) -> "Poly2":
        return other if isinstance(other, Poly2) else Poly2.const(other)

    def __add__(self, other):
        o = self._coerce(other)
        d = dict(self.terms)
        for k, c in o.terms.items():
            d[k] = d.get(k, Fraction(0)) + c
        return Poly2(d)

    __radd__ = __add__

    def __neg__(self):
        return Poly2({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly2):
            o = as_q(other)
            return Poly2({k: c * o for k, c in self.terms.items()})
        d: dict[tuple[int, int], Fraction] = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                k = (i1 + i2, j1 + j2)
                d[k] = d.get(k, Fraction(0)) + c1 * c2
        return Poly2(d)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Poly2.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __call__(self, x, y):
        x, y = as_q(x), as_q(y)
        return sum((c * x ** i * y ** j for (i, j), c in self.terms.items()), Fraction(0))

    def dx(self) -> "Poly2":
        return Poly2({(i - 1, j): i * c for (i, j), c in self.terms.items() if i})

    def dy(self) -> "Poly2":
        return Poly2({(i, j - 1): j * c for (i, j), c in self.terms.items() if j})

    def gradient(self, x, y) -> tuple[Fraction, Fraction]:
        return self.dx()(x, y), self.dy()(x, y)

    def homogeneous_part(self, k: int) -> "Poly2":
        return Poly2({key: c for key, c in self.terms.items() if key[0] + key[1] == k})

    def low_degree(self) -> int:
        """Degree of the lowest nonzero homogeneous part (-1 for zero)."""
        return min((i + j for i, j in self.terms), default=-1)

    def translate(self, a, b) -> "Poly2":
        """f(x + a, y + b)."""
        a, b = as_q(a), as_q(b)
        xs = Poly2({(1, 0): 1, (0, 0): a})
        ys = Poly2({(0, 1): 1, (0, 0): b})
        return self.substitute(xs, ys)

    def substitute(self, xs: "Poly2", ys: "Poly2") -> "Poly2":
        out = Poly2()
        xp: dict[int, Poly2] = {0: Poly2.const(1)}
        yp: dict[int, Poly2] = {0: Poly2.const(1)}
        for i in range(1, self.deg_x() + 1):
            xp[i] = xp[i - 1] * xs
        for j in range(1, self.deg_y() + 1):
            yp[j] = yp[j - 1] * ys
        for (i, j), c in self.terms.items():
            out = out + xp[i] * yp[j] * c
        return out

    def restrict(self, x0, dx, y0, dy) -> Poly1:
        """Poly1 in s of f(x0 + s*dx, y0 + s*dy)."""
        xs, ys = Poly1([x0, dx]), Poly1([y0, dy])
        xp = [Poly1([1])]
        yp = [Poly1([1])]
        for _ in range(self.deg_x()):
            xp.append(xp[-1] * xs)
        for _ in range(self.deg_y()):
            yp.append(yp[-1] * ys)
        out = Poly1()
        for (i, j), c in self.terms.items():
            out = out + xp[i] * yp[j] * c
        return out

    def eval_x(self, x0) -> Poly1:
        """f(x0, y) as a Poly1 in y."""
        x0 = as_q(x0)
        c = [Fraction(0)] * (self.deg_y() + 1)
        for (i, j), a in self.terms.items():
            c[j] += a * x0 ** i
        return Poly1(c)

    def eval_y(self, y0) -> Poly1:
        y0 = as_q(y0)
        c = [Fraction(0)] * (self.deg_x() + 1)
        for (i, j), a in self.terms.items():
            c[i] += a * y0 ** j
        return Poly1(c)

    def as_y_poly(self) -> list[Poly1]:
        """Coefficients in y, each a Poly1 in x."""
        cols: list[list[Fraction]] = [[Fraction(0)] * (self.deg_x() + 1) for _ in range(self.deg_y() + 1)]
        for (i, j), a in self.terms.items():
            cols[j][i] = a
        return [Poly1(c) for c in cols]

    @classmethod
    def from_y_poly(cls, coeffs: Sequence[Poly1]) -> "Poly2":
        return cls(((i, j), a) for j, p in enumerate(coeffs) for i, a in enumerate(p.c))

    @classmethod
    def from_x_poly(cls, p: Poly1) -> "Poly2":
        return cls(((i, 0), a) for i, a in enumerate(p.c))

    def divmod_exact(self, other: "Poly2") -> tuple["Poly2", "Poly2"]:
        """Multivariate division in lex order (y > x)."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        lead_key = max(other.terms, key=lambda k: (k[1], k[0]))
        lead_c = other.terms[lead_key]
        rem = dict(self.terms)
        quo: dict[tuple[int, int], Fraction] = {}
        leftover: dict[tuple[int, int], Fraction] = {}
        while rem:
            k = max(rem, key=lambda k: (k[1], k[0]))
            c = rem[k]
            if k[0] >= lead_key[0] and k[1] >= lead_key[1]:
                mk = (k[0] - lead_key[0], k[1] - lead_key[1])
                coef = c / lead_c
                quo[mk] = quo.get(mk, Fraction(0)) + coef
                for (i, j), b in other.terms.items():
                    kk = (i + mk[0], j + mk[1])
                    v = rem.get(kk, Fraction(0)) - coef * b
                    if v:
                        rem[kk] = v
                    else:
                        rem.pop(kk, None)
            else:
                leftover[k] = c
                del rem[k]
        return Poly2(quo), Poly2(leftover)

    def __truediv__(self, other):
        if not isinstance(other, Poly2):
            return self * (1 / as_q(other))
        q, r = self.divmod_exact(other)
        if not r.is_zero():
            raise ArithmeticError_("inexact bivariate division")
        return q

    def normalized(self) -> "Poly2":
        """Scalar multiple with leading coefficient (lex y > x) equal to 1."""
        if self.is_zero():
            return self
        k = max(self.terms, key=lambda k: (k[1], k[0]))
        return self * (1 / self.terms[k])

    def sorted_terms(self) -> list[tuple[int, int, Fraction]]:
        return [(i, j, c) for (i, j), c in sorted(self.terms.items())]

    def to_json(self) -> list[list]:
        return [[i, j, q_to_str(c)] for i, j, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, data) -> "Poly2":
        out = []
        for entry in data:
            if len(entry) != 3:
                raise ValueError(f"monomial entry must be [i, j, coeff], got {entry!r}")
            i, j, c = entry
            if int(i) < 0 or int(j) < 0:
                raise ValueError(f"negative exponent in {entry!r}")
            out.append((int(i), int(j), as_q(c) if not isinstance(c, float) else _reject_float(c)))
        return cls.from_list(out)


def _reject_float(c):
    raise ValueError(f"floating point coefficient {c!r} not allowed; use 'num/den' strings")


# -- bivariate gcd and square-free part --------------------------------------

def _content_x(coeffs: list[Poly1]) -> Poly1:
    g = Poly1()
    for c in coeffs:
        g = g.gcd(c) if not g.is_zero() else c.monic()
        if g.degree == 0:
            return Poly1([1])
    return g


def _prem(f: list[Poly1], g: list[Poly1]) -> list[Poly1]:
    """Pseudo-remainder of y-polynomials over Q[x]."""
    r = list(f)
    dg = len(g) - 1
    lc = g[-1]
    while len(r) - 1 >= dg and r:
        dr = len(r) - 1
        lr = r[-1]
        shift = dr - dg
        r = [c * lc for c in r]
        for k, gc in enumerate(g):
            r[k + shift] = r[k + shift] - gc * lr
        while r and r[-1].is_zero():
            r.pop()
    return r


def _primitive(coeffs: list[Poly1]) -> list[Poly1]:
    cont = _content_x(coeffs)
    if cont.degree <= 0:
        lead = coeffs[-1].lead
        return [c * (1 / lead) for c in coeffs]
    out = [c / cont for c in coeffs]
    lead = out[-1].lead
    return [c * (1 / lead) for c in out]


def poly2_gcd(f: Poly2, g: Poly2) -> Poly2:
    """Greatest common divisor over Q, normalized to leading coefficient 1."""
    if f.is_zero():
        return g.normalized()
    if g.is_zero():
        return f.normalized()
    fy, gy = f.as_y_poly(), g.as_y_poly()
    cont = _content_x(fy).gcd(_content_x(gy))
    a, b = _primitive(fy), _primitive(gy)
    if len(a) < len(b):
        a, b = b, a
    while len(b) > 1:
        r = _prem(a, b)
        if not r:
            a = b
            break
        a, b = b, _primitive(r)
    else:
        # b is free of y, so the primitive parts are coprime
        a = [Poly1([1])]
    prim = Poly2.from_y_poly(a)
    return (prim * Poly2.from_x_poly(cont)).normalized()


def square_free_part(f: Poly2) -> Poly2:
    """Product of the distinct irreducible factors of f (up to a scalar)."""
    if f.is_zero():
        raise ArithmeticError_("square-free part of the zero polynomial")
    g = poly2_gcd(poly2_gcd(f, f.dx()), f.dy())
    if g.total_degree <= 0:
        return f.normalized()
    return (f / g).normalized()


def resultant_y(f: Poly2, g: Poly2) -> Poly1:
    """Resultant in y of two bivariate polynomials, a Poly1 in x.

    Fraction-free Bareiss elimination on the Sylvester matrix over Q[x].
    """
    fc, gc = f.as_y_poly(), g.as_y_poly()
    m, n = len(fc) - 1, len(gc) - 1
    if m < 0 or n < 0:
        raise ArithmeticError_("undefined resultant")
    if m == 0:
        return fc[0] ** n
    if n == 0:
        return gc[0] ** m
    size = m + n
    zero = Poly1()
    rows = []
    for i in range(n):
        row = [zero] * size
        for k in range(m + 1):
            row[i + k] = fc[m - k]
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for k in range(n + 1):
            row[i + k] = gc[n - k]
        rows.append(row)
    return _bareiss_det(rows)


def _bareiss_det(a: list[list[Poly1]]) -> Poly1:
    n = len(a)
    a = [list(r) for r in a]
    sign = 1
    prev = Poly1([1])
    for k in range(n - 1):
        if a[k][k].is_zero():
            piv = next((r for r in range(k + 1, n) if not a[r][k].is_zero()), None)
            if piv is None:
                return Poly1()
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return a[n - 1][n - 1] * sign
