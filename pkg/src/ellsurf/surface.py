"""Elliptic curves over Q(T): discriminant form y^2 = f(x, T) or long Weierstrass form."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .curve import SingularCurve, WeierstrassQ
from .numth import BiPoly, Poly, ShapeError

WEIERSTRASS = "weierstrass"
DISCRIMINANT = "discriminant"


@dataclass(frozen=True)
class RatPointQT:
    """Point whose coordinates are polynomials in T over Q."""

    x: Poly
    y: Poly

    @classmethod
    def of(cls, x, y) -> "RatPointQT":
        def lift(v):
            return v if isinstance(v, Poly) else Poly.const(Fraction(v))

        return cls(lift(x), lift(y))

    def at(self, t0) -> tuple[Fraction, Fraction]:
        return Fraction(self.x(t0)), Fraction(self.y(t0))


@dataclass(frozen=True)
class SurfaceQT:
    form: str
    a: tuple[Poly, ...] = ()
    f: BiPoly | None = None
    provenance: str = ""
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    @classmethod
    def weierstrass(cls, a1, a2, a3, a4, a6, provenance="", **meta) -> "SurfaceQT":
        coeffs = tuple(c if isinstance(c, Poly) else Poly.const(c) for c in (a1, a2, a3, a4, a6))
        s = cls(WEIERSTRASS, coeffs, None, provenance, meta)
        if not s.disc():
            raise SingularCurve("discriminant vanishes identically in T")
        return s

    @classmethod
    def discriminant_form(cls, f: BiPoly, provenance="", **meta) -> "SurfaceQT":
        if f.deg_x not in (3, 4):
            raise ShapeError(f"y^2 = f(x, T) needs deg_x f in (3, 4), got {f.deg_x}")
        return cls(DISCRIMINANT, (), f, provenance, meta)

    # -- long Weierstrass invariants, as polynomials in T
    def _b(self):
        a1, a2, a3, a4, a6 = self.a
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    def c4c6(self) -> tuple[Poly, Poly]:
        self._need_weierstrass()
        b2, b4, b6, _ = self._b()
        return b2 * b2 - 24 * b4, -(b2**3) + 36 * b2 * b4 - 216 * b6

    def disc(self) -> Poly:
        self._need_weierstrass()
        b2, b4, b6, b8 = self._b()
        return -(b2 * b2 * b8) - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def short_form(self) -> tuple[Poly, Poly]:
        """(A, B) with y^2 = x^3 + A x + B isomorphic over Q(T)."""
        c4, c6 = self.c4c6()
        return c4 * Fraction(-1, 48), c6 * Fraction(-1, 864)

    def rhs(self) -> BiPoly:
        """Polynomial in (x, T) whose square classes give the point count.

        For the Weierstrass form this is 4x^3 + b2 x^2 + 2 b4 x + b6 (the
        completed square); for the discriminant form it is f itself.
        """
        if self.form == DISCRIMINANT:
            return self.f
        b2, b4, b6, _ = self._b()
        return BiPoly.from_x_coeffs([b6, 2 * b4, b2, Poly.const(4)])

    def contains(self, P: RatPointQT) -> bool:
        """Exact polynomial identity check of the curve equation in T."""
        x, y = P.x, P.y
        if self.form == DISCRIMINANT:
            rhs = Poly()
            for i, ci in enumerate(self.f.x_coeffs()):
                rhs = rhs + ci * x**i
            return y * y == rhs
        a1, a2, a3, a4, a6 = self.a
        return y * y + a1 * x * y + a3 * y == x**3 + a2 * x * x + a4 * x + a6

    def fiber(self, t0) -> WeierstrassQ:
        self._need_weierstrass()
        vals = [c(Fraction(t0)) for c in self.a]
        return WeierstrassQ(*vals)

    def _need_weierstrass(self):
        if self.form != WEIERSTRASS:
            raise ShapeError("operation needs the long Weierstrass form")

    def degrees(self) -> Sequence[int]:
        if self.form == WEIERSTRASS:
            return [c.degree for c in self.a]
        return [self.f.deg_x, self.f.deg_T]
