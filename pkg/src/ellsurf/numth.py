"""Exact integer, modular and polynomial arithmetic.

Rationals are ``fractions.Fraction`` (always reduced, positive denominator).
Polynomials store coefficients lowest degree first with no trailing zeros.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np


class InvalidModulus(ValueError):
    pass


class DegeneratePolynomial(ValueError):
    pass


class ShapeError(ValueError):
    pass


# ---------------------------------------------------------------------------
# integers

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


@lru_cache(maxsize=4096)
def is_prime(n: int) -> bool:
    """Miller-Rabin; the fixed base set is deterministic for n < 3.3e24."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for q in range(2, math.isqrt(n) + 1):
        if sieve[q]:
            sieve[q * q :: q] = False
    return [int(q) for q in np.flatnonzero(sieve)]


def primes_between(lo: int, hi: int) -> list[int]:
    return [q for q in primes_up_to(hi) if q >= lo]


def check_odd_prime(p: int) -> None:
    if p < 3 or p % 2 == 0 or not is_prime(p):
        raise InvalidModulus(f"modulus must be an odd prime, got {p}")


def legendre_symbol(a: int, p: int) -> int:
    """Legendre symbol (a/p) via quadratic reciprocity."""
    check_odd_prime(p)
    return jacobi(a, p)


def jacobi(a: int, n: int) -> int:
    # n odd positive, no primality assumed
    a %= n
    sign = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                sign = -sign
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            sign = -sign
        a %= n
    return sign if n == 1 else 0


def inv_mod(a: int, p: int) -> int:
    return pow(a % p, -1, p)


def frac_mod(c: Fraction | int, p: int) -> int:
    """Image of a rational in F_p; its denominator must be prime to p."""
    c = Fraction(c)
    if c.denominator % p == 0:
        raise ZeroDivisionError(f"denominator of {c} vanishes mod {p}")
    return c.numerator * inv_mod(c.denominator, p) % p


def valuation(n: int | Fraction, p: int) -> int:
    """p-adic valuation; +inf is not representable, so n must be nonzero."""
    n = Fraction(n)
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    num, den = n.numerator, n.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def exact_sqrt(n: int) -> int | None:
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def rational_sqrt(q: Fraction | int) -> Fraction | None:
    q = Fraction(q)
    a, b = exact_sqrt(q.numerator), exact_sqrt(q.denominator)
    if a is None or b is None:
        return None
    return Fraction(a, b)


@lru_cache(maxsize=8)
def _prime_blocks(bound: int, size: int = 256) -> tuple[tuple[int, tuple[int, ...]], ...]:
    ps = primes_up_to(bound)
    return tuple((math.prod(ps[i : i + size]), tuple(ps[i : i + size])) for i in range(0, len(ps), size))


def trial_factor(n: int, bound: int = 10**6) -> tuple[dict[int, int], int]:
    """Factor |n| over primes <= bound; returns (factors, unfactored cofactor)."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor zero")
    out: dict[int, int] = {}
    for block, ps in _prime_blocks(bound):
        if n == 1:
            break
        if math.gcd(n, block) == 1:
            continue
        for q in ps:
            if n % q == 0:
                e = 0
                while n % q == 0:
                    n //= q
                    e += 1
                out[q] = e
    if 1 < n <= bound * bound:
        # no prime factor <= bound, so n is prime
        out[n] = out.get(n, 0) + 1
        n = 1
    return out, n


def factor(n: int) -> dict[int, int]:
    """Full factorization; trial division first, sympy for what is left."""
    small, rest = trial_factor(n, 10**5)
    if rest > 1:
        if is_prime(rest):
            small[rest] = small.get(rest, 0) + 1
        else:
            from sympy import factorint

            for q, e in factorint(rest).items():
                small[int(q)] = small.get(int(q), 0) + e
    return small


# ---------------------------------------------------------------------------
# univariate polynomials


def _norm(coeffs: Iterable) -> tuple[Fraction, ...]:
    cs = [Fraction(c) for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


class Poly:
    """Immutable polynomial over Q, coefficients lowest degree first."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable = ()):
        object.__setattr__(self, "c", _norm(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def const(cls, a) -> "Poly":
        return cls((a,))

    @classmethod
    def from_roots(cls, roots: Iterable, lead=1) -> "Poly":
        p = cls.const(lead)
        for r in roots:
            p = p * cls((-Fraction(r), 1))
        return p

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def __bool__(self):
        return bool(self.c)

    def __len__(self):
        return len(self.c)

    def __getitem__(self, i: int) -> Fraction:
        return self.c[i] if 0 <= i < len(self.c) else Fraction(0)

    @property
    def lead(self) -> Fraction:
        return self.c[-1] if self.c else Fraction(0)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = _coerce(other)
            if other is None:
                return NotImplemented
        return self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        return f"Poly({[str(c) for c in self.c]})"

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        n = max(len(self.c), len(other.c))
        return Poly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-a for a in self.c)

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if not self.c or not other.c:
            return Poly()
        out = [Fraction(0)] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(other.c):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out, base = Poly.const(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.c)
        dq = other.degree
        q = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - dq - 1, -1, -1):
            coef = rem[k + dq] / other.lead
            q[k] = coef
            if coef:
                for j, b in enumerate(other.c):
                    rem[k + j] -= coef * b
        return Poly(q), Poly(rem[:dq])

    def __floordiv__(self, other):
        return self.divmod(_coerce(other))[0]

    def __mod__(self, other):
        return self.divmod(_coerce(other))[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError("polynomial division is not exact")
        return q

    def __call__(self, t):
        acc = 0
        for a in reversed(self.c):
            acc = acc * t + a
        return acc

    def compose(self, inner: "Poly") -> "Poly":
        acc = Poly()
        for a in reversed(self.c):
            acc = acc * inner + a
        return acc

    def derivative(self) -> "Poly":
        return Poly(i * a for i, a in enumerate(self.c) if i)

    def monic(self) -> "Poly":
        return Poly(a / self.lead for a in self.c)

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.c)

    def int_coeffs(self) -> list[int]:
        if not self.is_integral():
            raise ValueError("polynomial has non-integral coefficients")
        return [a.numerator for a in self.c]

    def denominator(self) -> int:
        return math.lcm(*(a.denominator for a in self.c)) if self.c else 1

    def content(self) -> Fraction:
        """Positive rational c with self / c primitive integral."""
        if not self.c:
            return Fraction(0)
        d = self.denominator()
        g = math.gcd(*((a * d).numerator for a in self.c))
        return Fraction(g, d)

    def primitive(self) -> "Poly":
        return self * (1 / self.content()) if self.c else self

    def mod_p(self, p: int) -> list[int]:
        return [frac_mod(a, p) for a in self.c]

    def valuation_at_zero(self) -> int:
        for i, a in enumerate(self.c):
            if a:
                return i
        raise ValueError("valuation of the zero polynomial")


def _coerce(v) -> Poly | None:
    if isinstance(v, Poly):
        return v
    if isinstance(v, (int, Fraction)):
        return Poly.const(v)
    return None


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while b:
        a, b = b, a % b
    return a.monic() if a else a


def squarefree_decomposition(f: Poly) -> list[Poly]:
    """Yun's algorithm: monic squarefree coprime a_1, a_2, ... with f ~ prod a_i^i."""
    if f.degree < 1:
        return []
    out = []
    df = f.derivative()
    a = poly_gcd(f, df)
    b = f.exact_div(a)
    c = df.exact_div(a)
    d = c - b.derivative()
    while b.degree > 0:
        a = poly_gcd(b, d)
        out.append(a)
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.derivative()
    return out


def divisors(n: int) -> list[int]:
    n = abs(n)
    out = [1]
    for q, e in factor(n).items():
        out = [d * q**k for d in out for k in range(e + 1)]
    return sorted(out)


def rational_roots(f: Poly) -> list[Fraction]:
    """Rational roots via content normalization and divisor testing."""
    if not f:
        raise DegeneratePolynomial("zero polynomial has every root")
    roots = []
    k = f.valuation_at_zero()
    if k:
        roots.append(Fraction(0))
        f = Poly(f.c[k:])
    if f.degree < 1:
        return roots
    g = f.primitive().int_coeffs()
    lead_divs = divisors(g[-1])
    const_divs = divisors(g[0])
    if len(lead_divs) * len(const_divs) <= 20000:
        cands = (Fraction(s * p, q) for q in lead_divs for p in const_divs for s in (1, -1))
    else:
        cands = _numeric_root_candidates(g)
    for r in cands:
        if r not in roots and f(r) == 0:
            roots.append(r)
    return sorted(roots)


def _numeric_root_candidates(g: list[int]) -> list[Fraction]:
    """Rational roots from the linear factors of an exact factorization over Z."""
    import sympy

    x = sympy.Symbol("x")
    _, facs = sympy.factor_list(sympy.Poly(list(reversed(g)), x, domain="ZZ"))
    return [Fraction(-int(h.all_coeffs()[1]), int(h.all_coeffs()[0])) for h, _ in facs if h.degree() == 1]


def poly_sqrt(f: Poly) -> Poly | None:
    """Exact polynomial square root over Q (sign: positive leading term)."""
    if not f:
        return Poly()
    if f.degree % 2:
        return None
    lead = rational_sqrt(f.lead)
    if lead is None:
        return None
    n = f.degree // 2
    # top-down coefficient matching
    g = [Fraction(0)] * (n + 1)
    g[n] = lead
    for k in range(n - 1, -1, -1):
        acc = f[n + k]
        for i in range(k + 1, n):
            j = n + k - i
            if k < j <= n:
                acc -= g[i] * g[j]
        g[k] = acc / (2 * lead)
    s = Poly(g)
    return s if s * s == f else None


def poly_roots_mod_p(f: Poly | Sequence, p: int) -> set[int]:
    """All roots of f in F_p by exhaustive evaluation."""
    if not isinstance(f, Poly):
        f = Poly(f)
    cs = f.mod_p(p)
    if not any(cs):
        raise DegeneratePolynomial(f"polynomial vanishes identically mod {p}")
    xs = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for a in reversed(cs):
        acc = (acc * xs + a) % p
    return {int(r) for r in np.flatnonzero(acc == 0)}


# ---------------------------------------------------------------------------
# bivariate polynomials in (x, T)


class BiPoly:
    """f(x, T) = sum c[i][j] x^i T^j with rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[int, int], Fraction | int] | None = None):
        clean = {}
        for (i, j), v in (terms or {}).items():
            v = Fraction(v)
            if v:
                clean[(i, j)] = v
        object.__setattr__(self, "terms", clean)

    @classmethod
    def from_x_coeffs(cls, xc: Sequence[Poly]) -> "BiPoly":
        """From polynomials in T multiplying x^0, x^1, ..."""
        return cls({(i, j): a for i, p in enumerate(xc) for j, a in enumerate(p.c)})

    @classmethod
    def from_t_coeffs(cls, tc: Sequence[Poly]) -> "BiPoly":
        """From polynomials in x multiplying T^0, T^1, ..."""
        return cls({(i, j): a for j, p in enumerate(tc) for i, a in enumerate(p.c)})

    @property
    def deg_x(self) -> int:
        return max((i for i, _ in self.terms), default=-1)

    @property
    def deg_T(self) -> int:
        return max((j for _, j in self.terms), default=-1)

    def x_coeffs(self) -> list[Poly]:
        out = [[0] * (self.deg_T + 1) for _ in range(self.deg_x + 1)]
        for (i, j), v in self.terms.items():
            out[i][j] = v
        return [Poly(r) for r in out]

    def t_coeffs(self) -> list[Poly]:
        out = [[0] * (self.deg_x + 1) for _ in range(self.deg_T + 1)]
        for (i, j), v in self.terms.items():
            out[j][i] = v
        return [Poly(r) for r in out]

    def __call__(self, x, t):
        return sum(v * x**i * t**j for (i, j), v in self.terms.items())

    def at_T(self, t) -> Poly:
        return Poly(p(t) for p in self.x_coeffs())

    def at_x(self, x) -> Poly:
        return Poly(p(x) for p in self.t_coeffs())

    def __eq__(self, other):
        return isinstance(other, BiPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"BiPoly({ {k: str(v) for k, v in sorted(self.terms.items())} })"

    def denominator(self) -> int:
        return math.lcm(*(v.denominator for v in self.terms.values())) if self.terms else 1

    def scale(self, k) -> "BiPoly":
        return BiPoly({key: v * k for key, v in self.terms.items()})

    def mod_p_matrix(self, p: int) -> np.ndarray:
        """Coefficient matrix M[i, j] of x^i T^j reduced mod p (int64)."""
        m = np.zeros((self.deg_x + 1, self.deg_T + 1), dtype=np.int64)
        for (i, j), v in self.terms.items():
            m[i, j] = frac_mod(v, p)
        return m


def bipoly_discriminant_in_T(f: BiPoly) -> Poly:
    """One quarter of the T-discriminant of f = u T^2 + 2 v T - w, i.e. v^2 + u w."""
    if f.deg_T != 2:
        raise ShapeError(f"expected a polynomial quadratic in T, got deg_T = {f.deg_T}")
    w_neg, two_v, u = f.t_coeffs()
    v = two_v * Fraction(1, 2)
    return v * v - u * w_neg
