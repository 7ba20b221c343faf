"""Fiber point counts, Nagao averages and the rank-6 character sum certificate."""
from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from . import kernels
from .construction import Rank6Params
from .legendre import Branch, quadratic_sum
from .numth import InvalidModulus, check_odd_prime, frac_mod, is_prime, primes_up_to
from .surface import DISCRIMINANT, SurfaceQT


class UnsupportedCharacteristic(InvalidModulus):
    pass


class BadReduction(ArithmeticError):
    """A coefficient denominator vanishes mod p."""


@dataclass(frozen=True)
class FiberCount:
    p: int
    t: int
    N: int
    a: int
    bad: bool


@dataclass(frozen=True)
class NagaoRecord:
    p: int
    A: Fraction
    minus_p_A: int
    expected: int | None = None
    bad_rows: int = 0

    @property
    def deviation(self) -> int | None:
        return None if self.expected is None else self.minus_p_A - self.expected


def _check_p(p: int) -> None:
    if p == 2:
        raise UnsupportedCharacteristic("characteristic 2 is not supported")
    if p >= kernels.KERNEL_PRIME_BOUND:
        raise InvalidModulus(f"p = {p} is above the kernel bound {kernels.KERNEL_PRIME_BOUND}")
    check_odd_prime(p)


def _poly_mod(cs: list[int], p: int) -> list[int]:
    cs = [c % p for c in cs]
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


def _polymod_p(a: list[int], b: list[int], p: int) -> list[int]:
    a = a[:]
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b):
        q = a[-1] * inv % p
        shift = len(a) - len(b)
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - q * bi) % p
        a = _poly_mod(a, p)
        if not a:
            break
    return a


def _repeated_root_mod_p(cs: list[int], p: int) -> bool:
    """True if the polynomial (low degree first) has a repeated factor over F_p-bar."""
    f = _poly_mod(cs, p)
    df = _poly_mod([i * c for i, c in enumerate(f)][1:], p)
    if not df:
        return len(f) > 1
    a, b = f, df
    while b:
        a, b = b, _polymod_p(a, b, p)
    return len(a) > 1


def _weierstrass_at(surface: SurfaceQT, t: int, p: int) -> list[int]:
    try:
        return [frac_mod(c(Fraction(t)), p) for c in surface.a]
    except ZeroDivisionError as e:
        raise BadReduction(str(e)) from None


def count_fiber(surface: SurfaceQT, t: int, p: int) -> FiberCount:
    """Point count of the fiber at T = t over F_p.

    Weierstrass fibers with p | disc(t) are bad and get a = 0.  For the
    discriminant form a = -sum_x (f(x, t)/p) is kept as is even on bad
    fibers, so that summing over t reproduces the double character sum.
    """
    _check_p(p)
    t %= p
    if surface.form == DISCRIMINANT:
        try:
            cs = [frac_mod(c(Fraction(t)), p) for c in surface.f.x_coeffs()]
        except ZeroDivisionError as e:
            raise BadReduction(str(e)) from None
        chi = kernels.char_table(p)
        vals = kernels.poly_values(np.array(cs, dtype=np.int64), p)
        s = int(chi[vals].sum())
        deg = len(cs) - 1
        bad = cs[deg] == 0 or _repeated_root_mod_p(cs, p)
        return FiberCount(p, t, p + 1 + s, -s, bad)

    a1, a2, a3, a4, a6 = _weierstrass_at(surface, t, p)
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    disc = (-b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6) % p
    if p == 3:
        n = 1
        for x in range(p):
            for y in range(p):
                if (y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6) % p == 0:
                    n += 1
    else:
        chi = kernels.char_table(p)
        vals = kernels.poly_values(np.array([b6, 2 * b4, b2, 4], dtype=np.int64) % p, p)
        n = p + 1 + int(chi[vals].sum())
    bad = disc == 0
    return FiberCount(p, t, n, 0 if bad else p + 1 - n, bad)


def _row_sums(f, p: int) -> np.ndarray:
    try:
        m = f.mod_p_matrix(p)
    except ZeroDivisionError as e:
        raise BadReduction(str(e)) from None
    return kernels.row_sums(m, p, kernels.char_table(p))


def bad_rows(surface: SurfaceQT, p: int) -> np.ndarray:
    """Boolean mask over t in F_p of fibers with p | disc(t) (Weierstrass form)."""
    try:
        d = surface.disc().mod_p(p)
    except ZeroDivisionError as e:
        raise BadReduction(str(e)) from None
    return kernels.poly_values(np.array(d, dtype=np.int64), p) == 0


def nagao_sum(surface: SurfaceQT, p: int, expected: int | None = None) -> NagaoRecord:
    """A_E(p) = (1/p) sum_t a_t(p) from the O(p^2) double character sum."""
    _check_p(p)
    rows = _row_sums(surface.rhs(), p)
    nbad = 0
    if surface.form != DISCRIMINANT:
        mask = bad_rows(surface, p)
        nbad = int(mask.sum())
        rows = np.where(mask, 0, rows)
    total = int(rows.sum())  # = -sum_t a_t
    return NagaoRecord(p, Fraction(-total, p), total, expected, nbad)


def nagao_by_fibers(surface: SurfaceQT, p: int) -> NagaoRecord:
    """Same as nagao_sum, one fiber at a time; slow, for cross-checking."""
    total = -sum(count_fiber(surface, t, p).a for t in range(p))
    return NagaoRecord(p, Fraction(-total, p), total)


def _pool_map(fn: Callable, items: Sequence, jobs: int | None):
    jobs = jobs or os.cpu_count() or 1
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


def nagao_table(
    surface: SurfaceQT,
    primes: Iterable[int],
    expected: Callable[[int], int] | None = None,
    jobs: int | None = None,
) -> tuple[list[NagaoRecord], dict[int, str]]:
    """Nagao records over many primes, in prime order, plus primes skipped with reason."""
    primes = sorted(set(primes))
    skipped: dict[int, str] = {}

    def one(p):
        try:
            return nagao_sum(surface, p, expected(p) if expected else None)
        except (BadReduction, UnsupportedCharacteristic) as e:
            skipped[p] = str(e)
            return None

    recs = [r for r in _pool_map(one, primes, jobs) if r is not None]
    return recs, skipped


# ---------------------------------------------------------------------------
# the three-line certificate for -p A_E(p) = 6p


@dataclass(frozen=True)
class CertificateResult:
    p: int
    passed: bool
    zero_line: int | None = None
    root_line: int | None = None
    other_line: int | None = None
    skipped: str | None = None

    @property
    def total(self) -> int | None:
        if self.skipped:
            return None
        return self.zero_line + self.root_line + self.other_line

    @property
    def ledger(self) -> tuple[int, int, int] | None:
        if self.skipped:
            return None
        return (self.zero_line, self.root_line, self.other_line)


def certificate_skip_reason(params: Rank6Params, p: int) -> str | None:
    if p < 5 or not is_prime(p):
        return f"p = {p} is not a prime >= 5"
    sq = [r * r % p for r in params.roots]
    if 0 in sq:
        return f"a root rho_i is 0 mod {p}"
    if len(set(sq)) < len(sq):
        return f"the rho_i^2 are not distinct mod {p}"
    if params.c % p == 0:
        return f"c = 0 mod {p}"
    if params.A % p == 0:
        return f"A = 0 mod {p}"
    return None


def certificate_bad_primes(params: Rank6Params, pmax: int, pmin: int = 5) -> list[int]:
    return [p for p in primes_up_to(pmax) if p >= pmin and certificate_skip_reason(params, p)]


def rank6_exact_certificate(params: Rank6Params, p: int) -> CertificateResult:
    """Split sum_x sum_t (f(x,t)/p) into the x = 0 column, the six root columns
    and the remaining columns, each evaluated in closed form.

    The expected ledger is (0, 6(p-1), 6), totalling 6p.
    """
    why = certificate_skip_reason(params, p)
    if why:
        return CertificateResult(p, False, skipped=why)
    g, h = params.g(), params.h()
    gi = [int(v) % p for v in g.c]
    hi = [int(v) % p for v in h.c]

    def ev(cs, x):
        acc = 0
        for a in reversed(cs):
            acc = (acc * x + a) % p
        return acc

    # x = 0: f(0, t) = 2 c t - D, a linear polynomial in t
    zero = quadratic_sum(0, 2 * params.c, -params.D, p)
    zero_ok = zero.branch == Branch.DEGENERATE_LINEAR and zero.value == 0

    roots = {r * r % p for r in params.roots}
    root_line = 0
    roots_ok = True
    for x in sorted(roots):
        r = quadratic_sum(pow(x, 3, p), 2 * ev(gi, x), -ev(hi, x), p)
        roots_ok &= r.branch == Branch.DISCRIMINANT_DIVISIBLE and r.value == p - 1
        root_line += r.value

    other = 0
    for x in range(1, p):
        if x in roots:
            continue
        r = quadratic_sum(pow(x, 3, p), 2 * ev(gi, x), -ev(hi, x), p)
        if r.branch != Branch.GENERIC:
            roots_ok = False
        other += r.value
    passed = zero_ok and roots_ok and root_line == 6 * (p - 1) and other == 6
    return CertificateResult(p, passed, zero.value, root_line, other)


# ---------------------------------------------------------------------------
# Weierstrass form of the rank-6 family: -p A_E(p) = 6p + eps_p


@dataclass(frozen=True)
class EpsilonBreakdown:
    p: int
    eps: int
    k_rows: int  # -(row sums of f at the roots of T^2 + 2T - A + 1 mod p)
    bad_rows: int  # -(row sums of F at the other singular fibers)
    predicted: int  # 6p + k_rows + bad_rows, from the discriminant form

    @property
    def consistent(self) -> bool:
        return self.eps == self.predicted - 6 * self.p


def weierstrass_epsilon(params: Rank6Params, weier: SurfaceQT, p: int) -> EpsilonBreakdown:
    """eps_p measured directly and predicted row by row from the discriminant form.

    For k(t) = t^2 + 2t - A + 1 nonzero mod p the Weierstrass fiber is
    k^2 f(x/k, t), which has the same character sum as f(x, t).  So the
    difference from the discriminant-form total is the f-rows at k(t) = 0
    plus the singular fibers that get a_t = 0.
    """
    rec = nagao_sum(weier, p)
    f_rows = _row_sums(params.f(), p)
    F_rows = _row_sums(weier.rhs(), p)
    mask = bad_rows(weier, p)
    kvals = kernels.poly_values(np.array([(1 - params.A) % p, 2, 1], dtype=np.int64), p)
    kzero = kvals == 0
    k_part = -int(f_rows[kzero].sum())
    bad_part = -int(F_rows[mask & ~kzero].sum())
    # rows with k = 0 are always singular (a4 = a6 = 0), so they are already in mask
    disc_total = int(f_rows.sum())
    predicted = disc_total + k_part + bad_part
    return EpsilonBreakdown(p, rec.minus_p_A - 6 * p, k_part, bad_part, predicted)


# ---------------------------------------------------------------------------
# Rosen-Silverman partial sums


@dataclass
class PartialSum:
    X: int
    value: float
    records: list[NagaoRecord] = field(default_factory=list)
    skipped: dict[int, str] = field(default_factory=dict)


def rosen_silverman_partial(
    surface: SurfaceQT, X: int, jobs: int | None = None, pmin: int = 3
) -> PartialSum:
    """(1/X) sum_{p <= X} -A_E(p) log p over odd primes where the model reduces."""
    if X < 2:
        return PartialSum(X, 0.0)
    primes = [p for p in primes_up_to(X) if p >= max(pmin, 3)]
    recs, skipped = nagao_table(surface, primes, jobs=jobs)
    s = math.fsum(-float(r.A) * math.log(r.p) for r in recs)
    return PartialSum(X, s / X, recs, skipped)


def write_ledger(records: Iterable[NagaoRecord], fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["p", "A_num", "minus_p_A", "expected", "deviation"])
    for r in records:
        w.writerow(
            [
                r.p,
                r.A.numerator,
                r.minus_p_A,
                "" if r.expected is None else r.expected,
                "" if r.deviation is None else r.deviation,
            ]
        )


__all__ = [
    "BadReduction",
    "CertificateResult",
    "EpsilonBreakdown",
    "FiberCount",
    "NagaoRecord",
    "PartialSum",
    "UnsupportedCharacteristic",
    "certificate_bad_primes",
    "count_fiber",
    "nagao_by_fibers",
    "nagao_sum",
    "nagao_table",
    "rank6_exact_certificate",
    "rosen_silverman_partial",
    "weierstrass_epsilon",
    "write_ledger",
]
