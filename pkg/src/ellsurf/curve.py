"""Long Weierstrass curves over Q and their exact group law."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class SingularCurve(ValueError):
    pass


class CurveMismatch(ValueError):
    pass


class NotOnCurve(ValueError):
    pass


@dataclass(frozen=True)
class WeierstrassQ:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over Q."""

    a1: Fraction
    a2: Fraction
    a3: Fraction
    a4: Fraction
    a6: Fraction

    def __init__(self, a1=0, a2=0, a3=0, a4=0, a6=0, *, check=True):
        for k, v in zip(("a1", "a2", "a3", "a4", "a6"), (a1, a2, a3, a4, a6)):
            object.__setattr__(self, k, Fraction(v))
        if check and self.disc == 0:
            raise SingularCurve(f"singular Weierstrass equation {self.ainvs}")

    @classmethod
    def short(cls, a4, a6) -> "WeierstrassQ":
        return cls(0, 0, 0, a4, a6)

    @property
    def ainvs(self) -> tuple[Fraction, ...]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def b2(self):
        return self.a1**2 + 4 * self.a2

    @property
    def b4(self):
        return 2 * self.a4 + self.a1 * self.a3

    @property
    def b6(self):
        return self.a3**2 + 4 * self.a6

    @property
    def b8(self):
        a1, a2, a3, a4, a6 = self.ainvs
        return a1**2 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3**2 - a4**2

    @property
    def c4(self):
        return self.b2**2 - 24 * self.b4

    @property
    def c6(self):
        return -self.b2**3 + 36 * self.b2 * self.b4 - 216 * self.b6

    @property
    def disc(self):
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    @property
    def j_invariant(self):
        return self.c4**3 / self.disc

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.ainvs)

    def lhs_minus_rhs(self, x, y):
        a1, a2, a3, a4, a6 = self.ainvs
        return y * y + a1 * x * y + a3 * y - (x**3 + a2 * x * x + a4 * x + a6)

    def contains(self, x, y) -> bool:
        return self.lhs_minus_rhs(Fraction(x), Fraction(y)) == 0

    def point(self, x, y) -> "CurvePoint":
        x, y = Fraction(x), Fraction(y)
        if not self.contains(x, y):
            raise NotOnCurve(f"({x}, {y}) is not on {self}")
        return CurvePoint(self, x, y)

    def zero(self) -> "CurvePoint":
        return CurvePoint(self, None, None)

    def change_coords(self, u, r, s, t) -> "WeierstrassQ":
        """Curve in coordinates x = u^2 x' + r, y = u^3 y' + s u^2 x' + t."""
        u, r, s, t = map(Fraction, (u, r, s, t))
        a1, a2, a3, a4, a6 = self.ainvs
        n1 = (a1 + 2 * s) / u
        n2 = (a2 - s * a1 + 3 * r - s * s) / u**2
        n3 = (a3 + r * a1 + 2 * t) / u**3
        n4 = (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) / u**4
        n6 = (a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1) / u**6
        return WeierstrassQ(n1, n2, n3, n4, n6)

    def __str__(self):
        return "[" + ", ".join(str(a) for a in self.ainvs) + "]"


@dataclass(frozen=True)
class CurvePoint:
    """Point on a WeierstrassQ; x = y = None is the point at infinity."""

    curve: WeierstrassQ
    x: Fraction | None
    y: Fraction | None

    @property
    def is_zero(self) -> bool:
        return self.x is None

    def __iter__(self):
        yield self.x
        yield self.y

    def __neg__(self) -> "CurvePoint":
        if self.is_zero:
            return self
        E = self.curve
        return CurvePoint(E, self.x, -self.y - E.a1 * self.x - E.a3)

    def __add__(self, other: "CurvePoint") -> "CurvePoint":
        return add(self, other)

    def __sub__(self, other: "CurvePoint") -> "CurvePoint":
        return add(self, -other)

    def __mul__(self, n: int) -> "CurvePoint":
        return multiply(self, n)

    __rmul__ = __mul__

    def __repr__(self):
        if self.is_zero:
            return "CurvePoint(oo)"
        return f"CurvePoint({self.x}, {self.y})"


def add(P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    if P.curve != Q.curve:
        raise CurveMismatch("points lie on different curves")
    E = P.curve
    if P.is_zero:
        return Q
    if Q.is_zero:
        return P
    a1, a2, a3, a4, a6 = E.ainvs
    x1, y1 = P.x, P.y
    x2, y2 = Q.x, Q.y
    if x1 == x2:
        if y1 + y2 + a1 * x2 + a3 == 0:
            return E.zero()
        den = 2 * y1 + a1 * x1 + a3
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / den
        nu = (-x1**3 + a4 * x1 + 2 * a6 - a3 * y1) / den
    else:
        lam = (y2 - y1) / (x2 - x1)
        nu = (y1 * x2 - y2 * x1) / (x2 - x1)
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    return CurvePoint(E, x3, y3)


def multiply(P: CurvePoint, n: int) -> CurvePoint:
    if n < 0:
        return multiply(-P, -n)
    acc = P.curve.zero()
    base = P
    while n:
        if n & 1:
            acc = acc + base
        n >>= 1
        if n:
            base = base + base
    return acc
