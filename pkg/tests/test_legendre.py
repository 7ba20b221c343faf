import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ellsurf.legendre import (
    Branch,
    brute_force_char_sum,
    constant_sum,
    factorizable_sum,
    quadratic_sum,
)
from ellsurf.numth import InvalidModulus, Poly, legendre_symbol, primes_up_to

PRIMES_LT_100 = [p for p in primes_up_to(99) if p > 2]


def brute_pair(n1, n2, p):
    return sum(legendre_symbol(n1 + x, p) * legendre_symbol(n2 + x, p) for x in range(p))


def test_factorizable_examples():
    assert factorizable_sum(3, 3, 7) == 6
    assert factorizable_sum(0, 1, 5) == -1


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_factorizable_all_pairs(p):
    for n1, n2 in itertools.product(range(p), repeat=2):
        assert factorizable_sum(n1, n2, p) == brute_pair(n1, n2, p)


@pytest.mark.parametrize("p", [2, 1, -3])
def test_invalid_modulus(p):
    with pytest.raises(InvalidModulus):
        factorizable_sum(1, 2, p)
    with pytest.raises(InvalidModulus):
        quadratic_sum(1, 0, 0, p)


def test_quadratic_examples():
    r = quadratic_sum(1, 0, 0, 7)
    assert (r.value, r.branch) == (6, Branch.DISCRIMINANT_DIVISIBLE)
    r = quadratic_sum(1, 0, -1, 7)
    assert (r.value, r.branch) == (-1, Branch.GENERIC)
    r = quadratic_sum(0, 3, 5, 7)
    assert (r.value, r.branch) == (0, Branch.DEGENERATE_LINEAR)
    with pytest.raises(ValueError):
        quadratic_sum(7, 14, 1, 7)
    assert constant_sum(2, 7).value == 7


def test_brute_force_examples():
    assert brute_force_char_sum(Poly((0, 0, 1)), 5) == 4
    assert brute_force_char_sum(Poly((0, 1)), 7) == 0


@pytest.mark.parametrize("p", [p for p in PRIMES_LT_100 if p <= 31])
def test_quadratic_all_tuples_small(p):
    for a, b, c in itertools.product(range(p), repeat=3):
        if a == 0 and b == 0:
            continue
        r = quadratic_sum(a, b, c, p)
        assert r.value == brute_force_char_sum(Poly((c, b, a)), p)
        if r.branch == Branch.DISCRIMINANT_DIVISIBLE:
            assert r.value == (p - 1) * legendre_symbol(a, p)
        elif r.branch == Branch.GENERIC:
            assert r.value == -legendre_symbol(a, p)


@given(
    st.integers(-(10**12), 10**12),
    st.integers(-(10**12), 10**12),
    st.integers(-(10**12), 10**12),
    st.sampled_from([p for p in primes_up_to(101) if p > 2]),
)
def test_quadratic_random_against_brute(a, b, c, p):
    if a % p == 0 and b % p == 0:
        return
    assert quadratic_sum(a, b, c, p).value == brute_force_char_sum(Poly((c, b, a)), p)


@pytest.mark.parametrize("p", PRIMES_LT_100)
def test_nonsquare_delta_sums_agree(p):
    """sum_t ((t^2 - delta)/p) is the same for every non-square delta."""
    vals = {
        brute_force_char_sum(Poly((-d, 0, 1)), p)
        for d in range(1, p)
        if legendre_symbol(d, p) == -1
    }
    assert vals == {-1}
