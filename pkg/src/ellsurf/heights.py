"""Canonical heights, height pairings, Gram matrices and torsion tests.

Heights use the normalization h(P) = lim h_naive(x(2^n P)) / (2 * 4^n), so
that the generator (0, 0) of y^2 + y = x^3 - x has height 0.02555570...
Systems that drop the factor 1/2 report exactly twice these values.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import mpmath
from mpmath import mp, mpf

from .curve import CurveMismatch, CurvePoint, WeierstrassQ
from .numth import factor, is_prime, valuation
from .transforms import Isomorphism, minimal_model

DEFAULT_PRECISION = 128


class PrecisionError(ArithmeticError):
    pass


def default_precision() -> int:
    v = os.environ.get("ELLSURF_PRECISION_BITS")
    if not v:
        return DEFAULT_PRECISION
    bits = int(v)
    if bits < 32:
        raise PrecisionError(f"ELLSURF_PRECISION_BITS={bits} is below the 32-bit floor")
    return bits


@lru_cache(maxsize=64)
def _minimal(E: WeierstrassQ) -> tuple[WeierstrassQ, Isomorphism]:
    return minimal_model(E)


def to_minimal(P: CurvePoint) -> CurvePoint:
    Emin, iso = _minimal(P.curve)
    return iso.map_point(P, Emin)


# ---------------------------------------------------------------------------
# torsion


@dataclass(frozen=True)
class TorsionResult:
    order: int | None  # None means non-torsion
    reduction_orders: dict = field(default_factory=dict, compare=False)

    @property
    def torsion(self) -> bool:
        return self.order is not None


def _small_den(P: CurvePoint) -> bool:
    # on an integral model torsion points have 4x and 8y integral
    return P.is_zero or (4 % P.x.denominator == 0 and 8 % P.y.denominator == 0)


def _reduced_order(E: WeierstrassQ, P: CurvePoint, p: int) -> int:
    a1, a2, a3, a4, a6 = (int(a) % p for a in E.ainvs)
    x0, y0 = P.x.numerator * pow(P.x.denominator, -1, p) % p, P.y.numerator * pow(P.y.denominator, -1, p) % p

    def add(A, B):
        if A is None:
            return B
        if B is None:
            return A
        (x1, y1), (x2, y2) = A, B
        if x1 == x2:
            if (y1 + y2 + a1 * x2 + a3) % p == 0:
                return None
            lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) * pow(2 * y1 + a1 * x1 + a3, -1, p)
        else:
            lam = (y2 - y1) * pow(x2 - x1, -1, p)
        lam %= p
        x3 = (lam * lam + a1 * lam - a2 - x1 - x2) % p
        y3 = (-(lam + a1) * x3 - (y1 - lam * x1) - a3) % p
        return (x3, y3)

    Q = (x0, y0)
    acc = Q
    n = 1
    bound = p + 1 + 2 * math.isqrt(p) + 2
    while acc is not None:
        acc = add(acc, Q)
        n += 1
        if n > bound:
            raise ArithmeticError("reduced point order exceeds the Hasse bound")
    return n


def _good_primes_for(P: CurvePoint, count: int = 2) -> list[int]:
    E = P.curve
    disc = E.disc
    out = []
    p = 5
    while len(out) < count:
        if is_prime(p) and disc.numerator % p and P.x.denominator % p:
            out.append(p)
        p += 2
    return out


def torsion_check(P: CurvePoint, cross_check: bool = True) -> TorsionResult:
    """Order of P if it is torsion (orders over Q are at most 12), else None."""
    if P.is_zero:
        return TorsionResult(1)
    Q = to_minimal(P)
    order = None
    acc = Q
    for n in range(1, 13):
        if not _small_den(acc):
            break
        if n > 1:
            acc = acc + Q
        if acc.is_zero:
            order = n
            break
    red = {}
    if cross_check and not Q.is_zero:
        E = Q.curve
        for p in _good_primes_for(Q):
            red[p] = _reduced_order(E, Q, p)
        if order is not None and any(o != order for o in red.values()):
            raise ArithmeticError(f"torsion order {order} disagrees with reductions {red}")
    return TorsionResult(order, red)


def is_torsion_quick(P: CurvePoint) -> bool:
    return torsion_check(P, cross_check=False).torsion


# ---------------------------------------------------------------------------
# local heights


def _real_min_root(b2, b4, b6) -> mpf:
    roots = mpmath.polyroots([4, b2, 2 * b4, b6], maxsteps=200, extraprec=200)
    reals = [mpmath.re(r) for r in roots if abs(mpmath.im(r)) < mpf(10) ** (-mp.dps // 2)]
    if not reals:
        reals = [mpmath.re(r) for r in roots]
    return min(reals)


def archimedean_height(P: CurvePoint, bits: int) -> mpf:
    """Archimedean local height (without the 1/12 log|disc| term) by Tate's series."""
    E = P.curve
    b2, b4, b6, b8 = E.b2, E.b4, E.b6, E.b8
    with mp.workprec(bits + 64):
        r = int(mpmath.floor(_real_min_root(*(mpf(v.numerator) / v.denominator for v in (b2, b4, b6))))) - 1
        # shift x by the integer r so that x >= 1 on all real points
        b2s = b2 + 12 * r
        b4s = b4 + r * b2 + 6 * r * r
        b6s = b6 + 2 * r * b4 + r * r * b2 + 4 * r**3
        b8s = b8 + 3 * r * b6 + 3 * r * r * b4 + r**3 * b2 + 3 * r**4
        B2, B4, B6, B8 = (mpf(v.numerator) / v.denominator for v in (b2s, b4s, b6s, b8s))
        xs = P.x - r
        x = mpf(xs.numerator) / xs.denominator
        if x < 1 - mpf(2) ** (-bits):
            raise PrecisionError("shifted x-coordinate fell below 1; root isolation failed")
        t = 1 / x
        lam = mpmath.log(x) / 2
        f = mpf(1) / 8
        eps = mpf(2) ** (-(bits + 8))
        for _ in range(bits + 40):
            w = 4 * t + B2 * t**2 + 2 * B4 * t**3 + B6 * t**4
            z = 1 - B4 * t**2 - 2 * B6 * t**3 - B8 * t**4
            term = f * mpmath.log(abs(z))
            lam += term
            if abs(term) < eps and f < eps:
                break
            t = w / z
            f /= 4
        else:
            raise PrecisionError("Tate series did not converge")
        return lam


def _ord(v: Fraction, p: int) -> float:
    return math.inf if v == 0 else valuation(v, p)


def _singular_primes(P: CurvePoint) -> list[int]:
    """Primes where P reduces to the singular point (model assumed minimal)."""
    E = P.curve
    a1, a2, a3, a4, a6 = E.ainvs
    x, y = P.x, P.y
    psi2 = 2 * y + a1 * x + a3
    phi = 3 * x * x + 2 * a2 * x + a4 - a1 * y
    e = x.denominator
    g = math.gcd(E.disc.numerator, psi2.numerator, phi.numerator)
    # drop primes where P is not integral
    while True:
        h = math.gcd(g, e)
        if h == 1:
            break
        g //= h
    if g == 1:
        return []
    return sorted(factor(g))


def nonarchimedean_height(P: CurvePoint) -> tuple[mpf, dict]:
    """Sum of the finite local heights (without 1/12 log|disc| terms) on a minimal model."""
    E = P.curve
    total = mpmath.log(P.x.denominator) / 2
    corrections = {}
    a1, a2, a3, a4, a6 = E.ainvs
    x, y = P.x, P.y
    for p in _singular_primes(P):
        N = valuation(E.disc, p)
        psi2 = 2 * y + a1 * x + a3
        if E.c4.numerator % p:
            i = min(Fraction(_ord(psi2, p)), Fraction(N, 2))
            c = -i * (N - i) / (2 * N)
        else:
            psi3 = 3 * x**4 + E.b2 * x**3 + 3 * E.b4 * x * x + 3 * E.b6 * x + E.b8
            B, C = _ord(psi2, p), _ord(psi3, p)
            c = Fraction(-B, 3) if C >= 3 * B else Fraction(-C, 8)
        corrections[p] = c
        total += mpf(c.numerator) / c.denominator * mpmath.log(p)
    return total, corrections


def canonical_height(P: CurvePoint, precision_bits: int | None = None) -> mpf:
    """Canonical height of P; exactly 0 on torsion points."""
    bits = precision_bits or default_precision()
    if P.is_zero or is_torsion_quick(P):
        return mpf(0)
    Q = to_minimal(P)
    with mp.workprec(bits + 64):
        h = archimedean_height(Q, bits) + nonarchimedean_height(Q)[0]
    with mp.workprec(bits):
        return +h


def naive_height(x: Fraction) -> float:
    """log max(|num|, |den|) of a rational, safe for huge integers."""
    m = max(abs(x.numerator), x.denominator)
    return math.log(m) if m.bit_length() < 1000 else (m.bit_length() - 900) * math.log(2) + math.log(m >> (m.bit_length() - 900))


def doubling_limit_height(P: CurvePoint, n: int = 8) -> float:
    """Slow independent estimate h_naive(x(2^n P)) / (2 * 4^n)."""
    Q = P
    for _ in range(n):
        Q = Q + Q
        if Q.is_zero:
            return 0.0
    return naive_height(Q.x) / (2 * 4**n)


def height_pairing(P: CurvePoint, Q: CurvePoint, precision_bits: int | None = None) -> mpf:
    if P.curve != Q.curve:
        raise CurveMismatch("points lie on different curves")
    bits = precision_bits or default_precision()
    with mp.workprec(bits + 16):
        return (canonical_height(P + Q, bits) - canonical_height(P, bits) - canonical_height(Q, bits)) / 2


# ---------------------------------------------------------------------------
# Gram matrices and independence


@dataclass
class HeightGram:
    points: list
    matrix: list  # list of lists of mpf
    det: mpf
    rank: int
    precision: int
    pivots: list = field(default_factory=list)
    residual: float = 0.0

    def as_floats(self) -> list[list[float]]:
        return [[float(v) for v in row] for row in self.matrix]


def _pivoted_cholesky(M, tau: float):
    """Diagonal-pivoted Cholesky; returns (pivot order, accepted pivot values, max residual)."""
    n = len(M)
    A = [[mpf(v) for v in row] for row in M]
    scale = max((abs(A[i][i]) for i in range(n)), default=mpf(0))
    thresh = mpf(tau) * scale
    order = list(range(n))
    accepted = []
    for k in range(n):
        j = max(range(k, n), key=lambda i: A[order[i]][order[i]])
        order[k], order[j] = order[j], order[k]
        piv = A[order[k]][order[k]]
        if piv <= thresh or piv <= 0:
            rest = [abs(A[order[i]][order[i]]) for i in range(k, n)]
            return order[:k], accepted, float(max(rest)) if rest else 0.0
        accepted.append(piv)
        pk = order[k]
        for i in range(k + 1, n):
            a = order[i]
            fac = A[a][pk] / piv
            for jj in range(k + 1, n):
                b = order[jj]
                A[a][b] -= fac * A[pk][b]
    return order, accepted, 0.0


def gram(points: Sequence[CurvePoint], precision_bits: int | None = None, tau: float = 1e-6) -> HeightGram:
    bits = precision_bits or default_precision()
    pts = list(points)
    if pts and any(P.curve != pts[0].curve for P in pts):
        raise CurveMismatch("gram needs all points on one curve")
    n = len(pts)
    with mp.workprec(bits + 16):
        h = [canonical_height(P, bits) for P in pts]
        M = [[mpf(0)] * n for _ in range(n)]
        for i in range(n):
            M[i][i] = h[i]
            for j in range(i + 1, n):
                v = (canonical_height(pts[i] + pts[j], bits) - h[i] - h[j]) / 2
                M[i][j] = M[j][i] = v
        det = mpmath.det(mpmath.matrix(M)) if n else mpf(1)
        piv, _, resid = _pivoted_cholesky(M, tau)
    return HeightGram(pts, M, det, len(piv), bits, piv, resid)


@dataclass
class IndependenceResult:
    independent_count: int
    independent_indices: list
    relations: list  # integer vectors n with sum n_i P_i = O, verified exactly
    inconclusive: bool = False
    note: str = ""
    gram: HeightGram | None = None


def _relation_for(G: HeightGram, basis: list[int], j: int, max_den: int = 24) -> list[int] | None:
    with mp.workprec(G.precision + 16):
        sub = mpmath.matrix([[G.matrix[a][b] for b in basis] for a in basis])
        rhs = mpmath.matrix([G.matrix[a][j] for a in basis])
        coef = mpmath.lu_solve(sub, rhs)
    fr = [Fraction(float(c)).limit_denominator(max_den) for c in coef]
    den = math.lcm(*(f.denominator for f in fr)) if fr else 1
    n = len(G.points)
    vec = [0] * n
    for a, f in zip(basis, fr):
        vec[a] = -int(f * den)
    vec[j] = den
    g = math.gcd(*vec)
    vec = [v // g for v in vec]
    acc = G.points[0].curve.zero()
    for v, P in zip(vec, G.points):
        if v:
            acc = acc + P * v
    if acc.is_zero or is_torsion_quick(acc):
        return vec
    return None


def independence_test(
    points: Sequence[CurvePoint], precision_bits: int | None = None, tau: float = 1e-6, G: HeightGram | None = None
) -> IndependenceResult:
    """Numerical rank of the height Gram matrix, plus exactly verified relations."""
    G = G or gram(points, precision_bits, tau)
    n = len(G.points)
    _, accepted, resid = _pivoted_cholesky(G.matrix, tau)
    basis = sorted(G.pivots)
    if len(basis) < n and accepted and resid * 1e3 > float(min(accepted)):
        return IndependenceResult(
            len(basis), basis, [], True, "null-space residual not well separated; raise precision", G
        )
    rels = []
    for j in range(n):
        if j in basis:
            continue
        if G.matrix[j][j] == 0:
            rels.append([1 if k == j else 0 for k in range(n)])
            continue
        r = _relation_for(G, basis, j) if basis else None
        rels.append(r)
    note = ""
    if any(r is None for r in rels):
        note = "some dependent points have no small integer relation verified by the group law"
    return IndependenceResult(len(basis), basis, [r for r in rels if r is not None], False, note, G)


def normalization_scaling(det: float, target: float, dim: int) -> tuple[int, float]:
    """Pick k in {-dim, 0, dim} so that det * 2^k is closest to target; returns (k, rel error)."""
    best = None
    for k in (0, dim, -dim):
        val = det * 2.0**k
        err = abs(val - target) / abs(target)
        if best is None or err < best[1]:
            best = (k, err)
    return best
