"""Discriminant-method constructions of elliptic curves over Q(T)."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .curve import SingularCurve
from .numth import (
    BiPoly,
    Poly,
    ShapeError,
    bipoly_discriminant_in_T,
    exact_sqrt,
    poly_gcd,
    poly_sqrt,
    rational_roots,
    rational_sqrt,
    squarefree_decomposition,
    trial_factor,
)
from .surface import RatPointQT, SurfaceQT


class InvalidRoots(ValueError):
    pass


class NonSquareA(ValueError):
    pass


# ---------------------------------------------------------------------------
# rank 6 from six square roots


def _check_roots(roots: Sequence[int]) -> list[int]:
    roots = [int(r) for r in roots]
    if len(roots) != 6:
        raise InvalidRoots(f"need exactly six roots, got {len(roots)}")
    if any(r == 0 for r in roots):
        raise InvalidRoots("roots must be nonzero")
    sq = [r * r for r in roots]
    if len(set(sq)) != 6:
        raise InvalidRoots(f"repeated root: squares {sq} are not distinct")
    return roots


def roots_to_elementary(roots: Sequence[int]) -> tuple[int, ...]:
    """(R_0, ..., R_5) with prod (x - rho_i^2) = x^6 + R_5 x^5 + ... + R_0."""
    roots = _check_roots(roots)
    coeffs = [1]
    for r in roots:
        # multiply by (x - r^2)
        nxt = [0] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] += c
            nxt[i] -= r * r * c
        coeffs = nxt
    return tuple(coeffs[:6])


@dataclass(frozen=True)
class Rank6Params:
    roots: tuple[int, ...]
    R: tuple[int, ...]
    a: int
    b: int
    c: int
    A: int
    B: int
    C: int
    D: int

    def g(self) -> Poly:
        return Poly((self.c, self.b, self.a, 1))

    def h(self) -> Poly:
        return Poly((self.D, self.C, self.B, self.A - 1))

    def f(self) -> BiPoly:
        """x^3 T^2 + 2 g(x) T - h(x)."""
        return BiPoly.from_t_coeffs([-self.h(), 2 * self.g(), Poly((0, 0, 0, 1))])

    def D_T(self) -> Poly:
        g = self.g()
        return g * g + Poly((0, 0, 0, 1)) * self.h()

    @property
    def sqrt_A(self) -> int | None:
        return exact_sqrt(self.A)

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in ("a", "b", "c", "A", "B", "C", "D")}


def solve_rank6(roots: Sequence[int]) -> Rank6Params:
    roots = _check_roots(roots)
    R0, R1, R2, R3, R4, R5 = roots_to_elementary(roots)
    A = 64 * R0**3
    c = 8 * R0**2
    b = 4 * R0 * R1
    a = 4 * R0 * R2 - R1**2
    B = R5 * A - 2 * a
    C = R4 * A - a * a - 2 * b
    D = R3 * A - 2 * a * b - 2 * c
    params = Rank6Params(tuple(roots), (R0, R1, R2, R3, R4, R5), a, b, c, A, B, C, D)
    expected = Poly.from_roots([r * r for r in roots], lead=A)
    if params.D_T() != expected:
        raise ArithmeticError("D_T(x) does not factor over the prescribed roots")
    return params


@dataclass(frozen=True)
class AdmissibilityReport:
    t1: int
    t2: int
    D_t1: int
    D_t2: int
    bad_primes: frozenset
    cofactors: dict = field(compare=False)

    @property
    def admissible(self) -> bool:
        return self.D_t1 * self.D_t2 != 0


def quadratic_disc_at(params: Rank6Params, t: int) -> int:
    """(2bt - C)^2 - 4 (2at - B)(2ct - D)."""
    p = params
    return (2 * p.b * t - p.C) ** 2 - 4 * (2 * p.a * t - p.B) * (2 * p.c * t - p.D)


def admissibility_check(params: Rank6Params, bound: int = 10**6) -> AdmissibilityReport:
    s = params.sqrt_A
    if s is None:
        raise NonSquareA(f"A = {params.A} is not a perfect square; t1, t2 are irrational")
    t1, t2 = s - 1, -s - 1
    d1, d2 = quadratic_disc_at(params, t1), quadratic_disc_at(params, t2)
    named = {
        "D(t1)": d1,
        "D(t2)": d2,
        "t1-t2": t1 - t2,
        **params.as_dict(),
    }
    bad: set[int] = set()
    cofactors = {}
    for name, v in named.items():
        if v == 0:
            cofactors[name] = 0
            continue
        fs, rest = trial_factor(v, bound)
        bad.update(fs)
        if rest > 1:
            cofactors[name] = rest
    return AdmissibilityReport(t1, t2, d1, d2, frozenset(bad), cofactors)


def rank6_surface(params: Rank6Params) -> SurfaceQT:
    """The discriminant form y^2 = x^3 T^2 + 2 g(x) T - h(x)."""
    return SurfaceQT.discriminant_form(params.f(), provenance="rank6-discriminant", roots=params.roots)


def rank6_to_weierstrass(params: Rank6Params) -> SurfaceQT:
    p = params
    k = Poly((1 - p.A, 2, 1))  # T^2 + 2T - A + 1
    a2 = Poly((-p.B, 2 * p.a))
    a4 = Poly((-p.C, 2 * p.b)) * k
    a6 = Poly((-p.D, 2 * p.c)) * k * k
    return SurfaceQT.weierstrass(0, a2, 0, a4, a6, provenance="rank6-weierstrass", roots=p.roots)


# ---------------------------------------------------------------------------
# rationality of y^2 = x^3 + A(T) x + B(T)


def reduce_short_model(A: Poly, B: Poly) -> tuple[Poly, Poly]:
    """Divide out u(T)^4, u(T)^6 for the largest polynomial u allowed."""
    while True:
        if not A or not B:
            f = A or B
            k = 4 if A else 6
            u = Poly.const(1)
            for i, part in enumerate(squarefree_decomposition(f), start=1):
                u = u * part ** (i // k)
        else:
            pa = Poly.const(1)
            for i, part in enumerate(squarefree_decomposition(A), start=1):
                if i >= 4:
                    pa = pa * part
            pb = Poly.const(1)
            for i, part in enumerate(squarefree_decomposition(B), start=1):
                if i >= 6:
                    pb = pb * part
            u = poly_gcd(pa, pb)
        if u.degree < 1:
            return A, B
        A = A.exact_div(u**4) if A else A
        B = B.exact_div(u**6) if B else B


def classify_rationality(shortA: Poly, shortB: Poly) -> str:
    shortA = shortA if isinstance(shortA, Poly) else Poly.const(shortA)
    shortB = shortB if isinstance(shortB, Poly) else Poly.const(shortB)
    disc = -16 * (4 * shortA**3 + 27 * shortB**2)
    if not disc:
        raise SingularCurve("4A^3 + 27B^2 vanishes identically")
    A, B = reduce_short_model(shortA, shortB)
    dA = A.degree if A else -math.inf
    dB = B.degree if B else -math.inf
    m = max(3 * dA, 2 * dB)
    if 0 < m < 12:
        return "rational"
    disc = -16 * (4 * A**3 + 27 * B**2)
    if 3 * dA == 12 and 2 * dB == 12 and disc.degree == 12:
        return "rational"
    return "undetermined"


# ---------------------------------------------------------------------------
# quartic g variant: y^2 = x^4 T^2 + 2 g(x) T - h(x)


@dataclass(frozen=True)
class QuarticVariantReport:
    D: Poly
    factors: bool
    roots: tuple  # rho_i = gamma^2 x_i
    constant: Fraction | None


def quartic_variant_check(g: Poly, h: Poly, gamma: int) -> QuarticVariantReport:
    if g.degree != 4 or h.degree > 4:
        raise ShapeError("g must be quartic and h at most quartic")
    if g[0] == 0:
        raise ValueError("g(0) = d must be nonzero: the x = 0 t-sum would not vanish")
    if g.lead != 1 or h[4] != -1:
        raise ShapeError("x^4 coefficient of f must be T^2 + 2T + 1: need g monic and h = -x^4 + ...")
    x4 = Poly((0, 0, 0, 0, 1))
    D = g * g + x4 * h
    if D.degree != 7:
        return QuarticVariantReport(D, False, (), None)
    xs = rational_roots(D)
    if len(xs) != 7 or 0 in xs:
        return QuarticVariantReport(D, False, (), None)
    g2 = Fraction(gamma) ** 2
    rhos = tuple(g2 * x for x in xs)
    # D = K prod (gamma^2 x - rho_i)
    K = D.lead / g2**7
    ok = D == Poly.from_roots(xs, lead=D.lead)
    return QuarticVariantReport(D, ok, rhos if ok else (), K if ok else None)


def quartic_variant_surface(g: Poly, h: Poly) -> SurfaceQT:
    f = BiPoly.from_t_coeffs([-h, 2 * g, Poly((0, 0, 0, 0, 1))])
    return SurfaceQT.discriminant_form(f, provenance="quartic-variant")


# ---------------------------------------------------------------------------
# y^2 = A(x) T^4 + B(x) T^2 + C(x): points forced by special x


def biquadratic_surface(Aq: Poly, Bq: Poly, Cq: Poly, provenance="") -> SurfaceQT:
    f = BiPoly.from_t_coeffs([Cq, Poly(), Bq, Poly(), Aq])
    return SurfaceQT.discriminant_form(f, provenance=provenance)


def _common_rational_roots(f: Poly, g: Poly) -> list[Fraction]:
    if not f and not g:
        return []
    d = poly_gcd(f, g) if f and g else (f or g)
    if d.degree < 1:
        return []
    return rational_roots(d)


def quartic_special_points(Aq: Poly, Bq: Poly, Cq: Poly) -> list[RatPointQT]:
    """Points of y^2 = A(x)T^4 + B(x)T^2 + C(x) forced by special x."""
    found: dict[Fraction, RatPointQT] = {}
    T = Poly.x()
    # (1) A = B = 0, C a nonzero square: y = sqrt C
    for x0 in _common_rational_roots(Aq, Bq):
        s = rational_sqrt(Cq(x0))
        if s:
            found.setdefault(x0, RatPointQT.of(x0, s))
    # (2) A = C = 0, B a nonzero square: y = sqrt(B) T
    for x0 in _common_rational_roots(Aq, Cq):
        s = rational_sqrt(Bq(x0))
        if s:
            found.setdefault(x0, RatPointQT.of(x0, T * s))
    # (3)/(4) A a nonzero square and B^2 - 4AC = 0: y = sqrt(A) (T^2 + B / 2A)
    disc = Bq * Bq - 4 * Aq * Cq
    if disc:
        for x0 in rational_roots(disc):
            a0 = Aq(x0)
            s = rational_sqrt(a0) if a0 else None
            if s:
                y = (T * T + Bq(x0) / (2 * a0)) * s
                found.setdefault(x0, RatPointQT.of(x0, y))
    return [found[k] for k in sorted(found)]


# ---------------------------------------------------------------------------
# f = A^2 T^4 + B T^3 + C T^2 + D T + E^2


@dataclass(frozen=True)
class HigherDegreeReport:
    D1: Poly
    D2: Poly
    degree_bounds_ok: bool
    squares: tuple  # ((x0, sqrt of f(x0, T)), ...)


def higher_degree_d1_d2(Ap: Poly, Bp: Poly, Cp: Poly, Dp: Poly, Ep: Poly) -> HigherDegreeReport:
    if max(Ap.degree, Ep.degree) > 2 or max(Bp.degree, Cp.degree, Dp.degree) > 4:
        raise ShapeError("need deg_x(A, E) <= 2 and deg_x(B, C, D) <= 4")
    A2, A4 = Ap * Ap, Ap**4
    D1 = 8 * A4 * Dp - 4 * A2 * Bp * Cp + Bp**3
    D2 = 64 * A4 * A2 * Ep * Ep - 16 * A4 * Cp * Cp - Bp**4 + 8 * A2 * Cp * Bp * Bp
    bounds = D1.degree <= 12 and D2.degree <= 16
    squares = []
    for x0 in _common_rational_roots(D1, D2):
        a0 = Ap(x0)
        if a0 == 0:
            continue
        fx = Poly((Ep(x0) ** 2, Dp(x0), Cp(x0), Bp(x0), a0 * a0))
        s = poly_sqrt(fx)
        if s is None:
            raise ArithmeticError(f"D1 and D2 vanish at {x0} but f(x0, T) is not a square")
        squares.append((x0, s))
    return HigherDegreeReport(D1, D2, bounds, tuple(squares))


__all__ = [
    "AdmissibilityReport",
    "HigherDegreeReport",
    "InvalidRoots",
    "NonSquareA",
    "QuarticVariantReport",
    "Rank6Params",
    "admissibility_check",
    "biquadratic_surface",
    "bipoly_discriminant_in_T",
    "classify_rationality",
    "higher_degree_d1_d2",
    "quadratic_disc_at",
    "quartic_special_points",
    "quartic_variant_check",
    "quartic_variant_surface",
    "rank6_surface",
    "rank6_to_weierstrass",
    "reduce_short_model",
    "roots_to_elementary",
    "solve_rank6",
]
