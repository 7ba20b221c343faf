"""Quartic-to-cubic maps, specialization and minimal models over Q."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .curve import CurvePoint, SingularCurve, WeierstrassQ
from .numth import Poly, ShapeError, factor, poly_sqrt, rational_sqrt, valuation
from .surface import RatPointQT, SurfaceQT


class ExcludedPoint(ValueError):
    pass


class CannotNormalize(ValueError):
    pass


INF = None  # the point at infinity in PointMap inputs/outputs


@dataclass(frozen=True)
class PointMap:
    """Birational map quartic -> cubic (``forward``) with its inverse.

    Points are (x, y) tuples of Fractions, or ``None`` for infinity.
    ``forward_exclusions`` / ``inverse_exclusions`` list the inputs where the
    generic rational formula is undefined; the maps handle the stated special
    correspondences themselves and raise ExcludedPoint on the rest.
    """

    forward: Callable
    inverse: Callable
    forward_exclusions: tuple
    inverse_exclusions: tuple

    def round_trip(self, pt) -> bool:
        return self.inverse(self.forward(pt)) == pt


# ---------------------------------------------------------------------------
# y^2 = x^4 - 6c x^2 + 4d x + e  ->  Y^2 = 4X^3 - g2 X - g3


@dataclass(frozen=True)
class G2G3Cubic:
    """Y^2 = 4X^3 - g2 X - g3."""

    g2: Fraction
    g3: Fraction

    @property
    def disc(self) -> Fraction:
        return self.g2**3 - 27 * self.g3**2

    def contains(self, X, Y) -> bool:
        return Y * Y == 4 * X**3 - self.g2 * X - self.g3

    def weierstrass(self) -> WeierstrassQ:
        """y^2 = x^3 - g2/4 x - g3/4 via (X, Y) = (x, 2y)."""
        return WeierstrassQ.short(-self.g2 / 4, -self.g3 / 4)

    def to_weierstrass_point(self, pt):
        if pt is INF:
            return INF
        return (pt[0], pt[1] / 2)


def depressed_quartic_to_cubic(c, d, e) -> tuple[G2G3Cubic, PointMap]:
    c, d, e = Fraction(c), Fraction(d), Fraction(e)
    cubic = G2G3Cubic(e + 3 * c * c, -c * e - d * d + c**3)
    if cubic.disc == 0:
        raise SingularCurve(f"g2^3 - 27 g3^2 = 0 for (c, d, e) = ({c}, {d}, {e})")

    def to_cubic(pt):
        if pt is INF:
            raise ExcludedPoint("points at infinity of the quartic have no affine image formula")
        x, y = map(Fraction, pt)
        X = (y + x * x - c) / 2
        return (X, d + 2 * x * (X - c))

    def to_quartic(pt):
        if pt is INF:
            raise ExcludedPoint("infinity maps to a point at infinity of the quartic")
        X, Y = map(Fraction, pt)
        if X == c:
            if Y == d and d != 0:
                # removable 0/0: the unique quartic point with y = 3c - x^2
                x = (9 * c * c - e) / (4 * d)
                return (x, 3 * c - x * x)
            raise ExcludedPoint(f"({X}, {Y}) maps to a point at infinity of the quartic")
        x = (Y - d) / (2 * (X - c))
        return (x, -x * x + 2 * X + c)

    return cubic, PointMap(to_cubic, to_quartic, (INF,), (INF, (c, -d)))


# ---------------------------------------------------------------------------
# v^2 = a u^4 + b u^3 + c u^2 + d u + q^2  ->  long Weierstrass


def square_constant_coefficients(a, b, c, d, q) -> tuple[Fraction, ...]:
    """(a1, a2, a3, a4, a6) of the image cubic, with no smoothness check."""
    a, b, c, d, q = map(Fraction, (a, b, c, d, q))
    if q == 0:
        raise ShapeError("constant term q^2 must be nonzero")
    a2 = c - d * d / (4 * q * q)
    a4 = -4 * q * q * a
    return (d / q, a2, 2 * q * b, a4, a2 * a4)


def square_constant_quartic_to_cubic(a, b, c, d, q) -> tuple[WeierstrassQ, PointMap]:
    a1, a2, a3, a4, a6 = square_constant_coefficients(a, b, c, d, q)
    a, b, c, d, q = map(Fraction, (a, b, c, d, q))
    E = WeierstrassQ(a1, a2, a3, a4, a6, check=False)
    if E.disc == 0:
        raise SingularCurve(f"image cubic is singular for (a, b, c, d, q) = {(a, b, c, d, q)}")
    special = (-a2, a1 * a2 - a3)

    def to_cubic(pt):
        if pt is INF:
            raise ExcludedPoint("points at infinity of the quartic are not handled")
        u, v = map(Fraction, pt)
        if u == 0:
            if v == q:
                return INF
            if v == -q:
                return special
            raise ExcludedPoint(f"({u}, {v}) is not on the quartic")
        x = (2 * q * (v + q) + d * u) / (u * u)
        y = (4 * q * q * (v + q) + 2 * q * (d * u + c * u * u) - d * d * u * u / (2 * q)) / u**3
        return (x, y)

    def to_quartic(pt):
        if pt is INF:
            return (Fraction(0), q)
        x, y = map(Fraction, pt)
        if (x, y) == special:
            return (Fraction(0), -q)
        if y == 0:
            raise ExcludedPoint(f"y = 0 at ({x}, {y}): no affine preimage formula")
        u = (2 * q * (x + c) - d * d / (2 * q)) / y
        v = -q + u * (u * x - d) / (2 * q)
        return (u, v)

    return E, PointMap(to_cubic, to_quartic, ((0, "v != +-q"), INF), ("y = 0",))


# ---------------------------------------------------------------------------
# quartic helpers


@dataclass(frozen=True)
class ScaledQuartic:
    """Monic quartic Y^2 = X^4 + b X^3 + c X^2 + d X + e with X = s x, Y = s y."""

    coeffs: tuple | None  # (e, d, c, b, 1), lowest degree first
    s: object
    source: tuple = ()  # original (e, d, c, b, a) when coefficients are polynomials in T

    def at(self, t0) -> "ScaledQuartic":
        """The normalized quartic of the fiber T = t0 (polynomial input only)."""
        if not self.source:
            return self
        t0 = Fraction(t0)
        vals = [c(t0) if isinstance(c, Poly) else Fraction(c) for c in self.source]
        if self.s(t0) == 0:
            raise CannotNormalize(f"sqrt of the leading coefficient vanishes at T = {t0}")
        return leading_square_normalize(vals)

    def forward(self, pt):
        return (pt[0] * self.s, pt[1] * self.s)

    def inverse(self, pt):
        return (pt[0] / self.s, pt[1] / self.s)


def leading_square_normalize(coeffs: Sequence) -> ScaledQuartic:
    """Make a quartic with square leading coefficient s^2 monic.

    ``coeffs`` are (e, d, c, b, a) lowest first, rationals or polynomials in T.
    The substitution X = s x, Y = s y turns y^2 = a x^4 + b x^3 + ... into
    Y^2 = X^4 + (b/s) X^3 + c X^2 + (d s) X + e s^2.
    """
    e, d, c, b, a = coeffs
    if isinstance(a, Poly):
        s = poly_sqrt(a)
        if s is None or not s:
            raise CannotNormalize(f"leading coefficient {a} is not a square in Q[T]")
        b_over_s, rem = (b if isinstance(b, Poly) else Poly.const(b)).divmod(s)
        # b/s is only a rational function of T when s does not divide b; the
        # normalization then exists fiber by fiber through .at(t0)
        exact = None if rem else (e * s * s, d * s, c, b_over_s, Poly.const(1))
        return ScaledQuartic(exact, s, tuple(coeffs))
    s = rational_sqrt(a)
    if s is None or s == 0:
        raise CannotNormalize(f"leading coefficient {a} is not a nonzero rational square")
    return ScaledQuartic((Fraction(e) * s * s, Fraction(d) * s, Fraction(c), Fraction(b) / s, Fraction(1)), s)


def quartic_invariants(a, b, c, d, e):
    """Invariants I, J of a x^4 + b x^3 + c x^2 + d x + e."""
    I = 12 * a * e - 3 * b * d + c * c
    J = 72 * a * c * e + 9 * b * c * d - 27 * a * d * d - 27 * e * b * b - 2 * c**3
    return I, J


def quartic_jacobian_short(a, b, c, d, e):
    """(A, B) with the Jacobian y^2 = x^3 + A x + B = x^3 - 27 I x - 27 J."""
    I, J = quartic_invariants(a, b, c, d, e)
    return -27 * I, -27 * J


@dataclass(frozen=True)
class QuarticToWeierstrass:
    """Composite map from y^2 = quartic (square leading coefficient) to a
    short Weierstrass curve, through normalization, depression and the
    g2/g3 cubic."""

    curve: WeierstrassQ
    scaled: ScaledQuartic
    shift: Fraction
    cubic: G2G3Cubic
    cubic_map: PointMap

    def image(self, pt) -> CurvePoint:
        X, Y = self.scaled.forward(tuple(map(Fraction, pt)))
        X = X + self.shift
        Xc, Yc = self.cubic_map.forward((X, Y))
        return self.curve.point(Xc, Yc / 2)

    def preimage(self, P: CurvePoint):
        X, Y = self.cubic_map.inverse((P.x, 2 * P.y))
        return self.scaled.inverse((X - self.shift, Y))


def leading_square_quartic_to_weierstrass(coeffs: Sequence, sign: int = 1) -> QuarticToWeierstrass:
    """y^2 = quartic in x over Q with square leading coefficient -> Weierstrass.

    ``sign`` picks the square root of the leading coefficient, i.e. which
    point at infinity becomes the origin.
    """
    coeffs = [Fraction(v) for v in coeffs]
    sq = leading_square_normalize(coeffs)
    if sign < 0:
        sq = ScaledQuartic(
            (sq.coeffs[0], -sq.coeffs[1], sq.coeffs[2], -sq.coeffs[3], sq.coeffs[4]), -sq.s
        )
    e, d, c, b, _ = sq.coeffs
    # X = Z - b/4 removes the cubic term
    h = -b / 4
    shifted = Poly((e, d, c, b, 1)).compose(Poly((h, 1)))
    e2, d2, c2 = shifted[0], shifted[1], shifted[2]
    cc, dd = -c2 / 6, d2 / 4
    cubic, cmap = depressed_quartic_to_cubic(cc, dd, e2)
    return QuarticToWeierstrass(cubic.weierstrass(), sq, -h, cubic, cmap)


@dataclass(frozen=True)
class SquareConstantToWeierstrass:
    """y^2 = quartic in x whose value at x = x0 is q^2: recentre at x0 and map."""

    curve: WeierstrassQ
    x0: Fraction
    q: Fraction
    pmap: PointMap

    def image(self, pt) -> CurvePoint:
        x, y = map(Fraction, pt)
        img = self.pmap.forward((x - self.x0, y))
        if img is INF:
            return self.curve.zero()
        return self.curve.point(*img)


def square_value_quartic_to_weierstrass(coeffs: Sequence, x0=0, q=None) -> SquareConstantToWeierstrass:
    """Use the rational point (x0, q) of y^2 = quartic(x) as the origin."""
    f = Poly(coeffs)
    x0 = Fraction(x0)
    g = f.compose(Poly((x0, 1)))
    if q is None:
        q = rational_sqrt(g[0])
        if q is None:
            raise CannotNormalize(f"quartic value {g[0]} at x0 = {x0} is not a square")
    q = Fraction(q)
    if q * q != g[0]:
        raise ShapeError(f"q^2 = {q * q} differs from quartic value {g[0]}")
    E, pmap = square_constant_quartic_to_cubic(g[4], g[3], g[2], g[1], q)
    return SquareConstantToWeierstrass(E, x0, q, pmap)


# ---------------------------------------------------------------------------
# specialization


def specialize(s: SurfaceQT, t0) -> WeierstrassQ:
    t0 = Fraction(t0)
    if s.disc()(t0) == 0:
        raise SingularCurve(f"singular fiber at T = {t0}")
    return s.fiber(t0)


def specialize_point(P: RatPointQT, t0) -> tuple[Fraction, Fraction]:
    return P.at(Fraction(t0))


# ---------------------------------------------------------------------------
# minimal models


@dataclass(frozen=True)
class Isomorphism:
    """x = u^2 x' + r, y = u^3 y' + s u^2 x' + t from source to target."""

    u: Fraction
    r: Fraction
    s: Fraction
    t: Fraction

    def map_point(self, P: CurvePoint, target: WeierstrassQ) -> CurvePoint:
        if P.is_zero:
            return target.zero()
        x = (P.x - self.r) / self.u**2
        y = (P.y - self.s * (P.x - self.r) - self.t) / self.u**3
        return target.point(x, y)

    def map_xy(self, x, y):
        x, y = Fraction(x), Fraction(y)
        return ((x - self.r) / self.u**2, (y - self.s * (x - self.r) - self.t) / self.u**3)


def _integral_scale(E: WeierstrassQ) -> int:
    """Smallest D > 0 with D^i a_i integral for i = 1, 2, 3, 4, 6."""
    D = 1
    dens = [a.denominator for a in E.ainvs]
    for q in factor(math.lcm(*dens)):
        need = 0
        for w, den in zip((1, 2, 3, 4, 6), dens):
            if den % q == 0:
                need = max(need, -(-valuation(den, q) // w))
        D *= q**need
    return D


def kraus_ok(c4: int, c6: int, p: int) -> bool:
    """Kraus's local conditions for (c4, c6) to come from an integral model."""
    if p == 3:
        return c6 == 0 or valuation(c6, 3) != 2
    if p == 2:
        if c6 % 4 == 3:
            return True
        return (c4 == 0 or valuation(c4, 2) >= 4) and c6 % 32 in (0, 8)
    return True


def _vmin(c4: int, c6: int, p: int) -> int:
    ds = []
    if c4:
        ds.append(valuation(c4, p) // 4)
    if c6:
        ds.append(valuation(c6, p) // 6)
    disc, r = divmod(c4**3 - c6**2, 1728)
    if not r:
        ds.append(valuation(disc, p) // 12)
    return min(ds)


def c4c6_to_ainvs(c4: int, c6: int) -> tuple[int, ...]:
    """Reduced model (a1, a3 in {0,1}, a2 in {-1,0,1}) with given c4, c6."""
    b2 = (-c6) % 12
    if b2 > 6:
        b2 -= 12
    b4, r4 = divmod(b2 * b2 - c4, 24)
    b6, r6 = divmod(-(b2**3) + 36 * b2 * b4 - c6, 216)
    if r4 or r6:
        raise ArithmeticError(f"(c4, c6) = ({c4}, {c6}) admits no integral model")
    a1 = b2 & 1
    a3 = b6 & 1
    a2, r2 = divmod(b2 - a1, 4)
    a4, r4 = divmod(b4 - a1 * a3, 2)
    a6, r6 = divmod(b6 - a3, 4)
    if r2 or r4 or r6:
        raise ArithmeticError(f"(c4, c6) = ({c4}, {c6}) admits no integral model")
    return a1, a2, a3, a4, a6


def minimal_model(E: WeierstrassQ) -> tuple[WeierstrassQ, Isomorphism]:
    """Global minimal reduced model over Q by Laska-Kraus-Connell reduction."""
    if E.disc == 0:
        raise SingularCurve("singular curve has no minimal model")
    D = _integral_scale(E)
    c4 = E.c4 * D**4
    c6 = E.c6 * D**6
    assert c4.denominator == 1 and c6.denominator == 1
    c4, c6 = c4.numerator, c6.numerator
    g = math.gcd(c4, c6)
    primes = set(factor(g)) | {2, 3}
    u = 1
    for p in sorted(primes):
        if (c4 and c4 % p) or (c6 and c6 % p):
            continue
        d = _vmin(c4, c6, p)
        if p == 3 and d > 0 and c6 and valuation(c6, 3) == 6 * d + 2:
            d -= 1
        if p == 2:
            while d > 0 and not kraus_ok(c4 // 2 ** (4 * d), c6 // 2 ** (6 * d), 2):
                d -= 1
        u *= p**d
    c4m, c6m = c4 // u**4, c6 // u**6
    Emin = WeierstrassQ(*c4c6_to_ainvs(c4m, c6m))
    U = Fraction(u, D)
    a1, a2, a3 = E.a1, E.a2, E.a3
    s = (U * Emin.a1 - a1) / 2
    r = (U**2 * Emin.a2 - a2 + s * a1 + s * s) / 3
    t = (U**3 * Emin.a3 - a3 - r * a1) / 2
    iso = Isomorphism(U, r, s, t)
    if E.change_coords(U, r, s, t) != Emin:
        raise ArithmeticError("failed to recover the change of coordinates")
    return Emin, iso
