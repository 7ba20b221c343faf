"""Closed forms for linear and quadratic Legendre character sums."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .numth import InvalidModulus, Poly, check_odd_prime, legendre_symbol


class Branch(str, Enum):
    DISCRIMINANT_DIVISIBLE = "discriminant-divisible"
    GENERIC = "generic"
    DEGENERATE_LINEAR = "degenerate-linear"
    DEGENERATE_CONSTANT = "degenerate-constant"


@dataclass(frozen=True)
class QuadSumResult:
    value: int
    branch: Branch


def _check(p: int) -> None:
    if p <= 2:
        raise InvalidModulus(f"character sums need p > 2, got {p}")
    check_odd_prime(p)


def factorizable_sum(n1: int, n2: int, p: int) -> int:
    """sum_x ((n1 + x)/p) ((n2 + x)/p): p - 1 if n1 = n2 mod p, else -1."""
    _check(p)
    return p - 1 if (n1 - n2) % p == 0 else -1


def quadratic_sum(a: int, b: int, c: int, p: int) -> QuadSumResult:
    """sum_t ((a t^2 + b t + c)/p) in closed form.

    A linear polynomial (a = 0, b != 0 mod p) sums to zero and is returned
    in-band with the ``degenerate-linear`` tag.
    """
    _check(p)
    a, b, c = a % p, b % p, c % p
    if a == 0:
        if b == 0:
            raise ValueError(f"a and b are both zero mod {p}")
        return QuadSumResult(0, Branch.DEGENERATE_LINEAR)
    chi = legendre_symbol(a, p)
    if (b * b - 4 * a * c) % p == 0:
        return QuadSumResult((p - 1) * chi, Branch.DISCRIMINANT_DIVISIBLE)
    return QuadSumResult(-chi, Branch.GENERIC)


def constant_sum(c: int, p: int) -> QuadSumResult:
    """The fully degenerate case a = b = 0: p copies of (c/p)."""
    _check(p)
    return QuadSumResult(p * legendre_symbol(c, p), Branch.DEGENERATE_CONSTANT)


def brute_force_char_sum(f: Poly, p: int) -> int:
    check_odd_prime(p)
    cs = f.mod_p(p)
    total = 0
    for t in range(p):
        acc = 0
        for a in reversed(cs):
            acc = (acc * t + a) % p
        total += legendre_symbol(acc, p)
    return total
