"""Specialize catalog surfaces to cubic models over Q with their points mapped."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .catalog import CatalogEntry
from .curve import CurvePoint, SingularCurve, WeierstrassQ
from .numth import ShapeError, rational_sqrt
from .surface import DISCRIMINANT
from .transforms import (
    CannotNormalize,
    leading_square_quartic_to_weierstrass,
    minimal_model,
    square_value_quartic_to_weierstrass,
)


@dataclass
class FiberModel:
    curve: WeierstrassQ
    points: list[CurvePoint]
    route: str
    t0: Fraction | None = None
    info: dict = field(default_factory=dict)

    def minimal(self) -> "FiberModel":
        Emin, iso = minimal_model(self.curve)
        pts = [iso.map_point(P, Emin) for P in self.points]
        info = dict(self.info, minimal_from=str(self.curve), u=str(iso.u))
        return FiberModel(Emin, pts, self.route + "+minimal", self.t0, info)


def quartic_at(entry: CatalogEntry, t0) -> list[Fraction]:
    """Coefficients (low degree first) of the quartic in x at T = t0."""
    s = entry.surface
    if s.form != DISCRIMINANT:
        raise ShapeError(f"{entry.name} is not a y^2 = quartic(x) surface")
    q = s.f.at_T(Fraction(t0))
    return [Fraction(q[i]) for i in range(5)]


def specialized_points(entry: CatalogEntry, t0) -> list[tuple[Fraction, Fraction]]:
    return [P.at(Fraction(t0)) for P in entry.points]


def weierstrass_fiber(entry: CatalogEntry, t0=0) -> FiberModel:
    s = entry.surface
    E = s.fiber(Fraction(t0))
    pts = [E.point(*xy) for xy in specialized_points(entry, t0)]
    return FiberModel(E, pts, "weierstrass", Fraction(t0))


def square_value_fiber(entry: CatalogEntry, t0, x0=0, sign: int = 1) -> FiberModel:
    """Send the quartic point (x0, sign * sqrt(f(x0))) to the origin of a cubic."""
    coeffs = quartic_at(entry, t0)
    val = sum(c * Fraction(x0) ** i for i, c in enumerate(coeffs))
    q = rational_sqrt(val)
    if q is None or q == 0:
        raise CannotNormalize(f"f({x0}) = {val} at T = {t0} is not a nonzero square")
    m = square_value_quartic_to_weierstrass(coeffs, x0, sign * q)
    pts = [m.image(xy) for xy in specialized_points(entry, t0)]
    return FiberModel(m.curve, pts, f"square-value x0={x0} q={sign * q}", Fraction(t0), {"q": sign * q})


def leading_square_fiber(entry: CatalogEntry, t0, sign: int = 1) -> FiberModel:
    """Send a point at infinity of the quartic to the origin of a cubic."""
    coeffs = quartic_at(entry, t0)
    m = leading_square_quartic_to_weierstrass(coeffs, sign)
    pts = [m.image(xy) for xy in specialized_points(entry, t0)]
    return FiberModel(m.curve, pts, f"leading-square sign={sign:+d}", Fraction(t0), {"s": m.scaled.s})


def fiber_models(entry: CatalogEntry, t0) -> list[FiberModel]:
    """Every cubic model reachable from the quartic at T = t0 by the two maps."""
    if entry.surface.form != DISCRIMINANT:
        return [weierstrass_fiber(entry, t0)]
    out = []
    for sign in (1, -1):
        try:
            out.append(leading_square_fiber(entry, t0, sign))
        except (CannotNormalize, SingularCurve):
            pass
    for sign in (1, -1):
        try:
            out.append(square_value_fiber(entry, t0, 0, sign))
        except (CannotNormalize, SingularCurve):
            pass
    return out


def is_good_specialization(entry: CatalogEntry, t0) -> bool:
    """Fiber is smooth and no listed point has a vanishing denominator or y = 0 issue."""
    try:
        models = fiber_models(entry, t0)
    except (SingularCurve, CannotNormalize, ZeroDivisionError):
        return False
    return bool(models)
