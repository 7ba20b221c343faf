import io
from fractions import Fraction

import pytest

from ellsurf.analytic import (
    BadReduction,
    UnsupportedCharacteristic,
    bad_rows,
    certificate_bad_primes,
    count_fiber,
    nagao_by_fibers,
    nagao_sum,
    nagao_table,
    rank6_exact_certificate,
    rosen_silverman_partial,
    weierstrass_epsilon,
    write_ledger,
)
from ellsurf.construction import rank6_surface, rank6_to_weierstrass, solve_rank6
from ellsurf.numth import BiPoly, Poly
from ellsurf.surface import SurfaceQT

T = Poly.x()


@pytest.fixture(scope="module")
def params():
    return solve_rank6([1, 2, 3, 4, 5, 6])


@pytest.fixture(scope="module")
def weier(params):
    return rank6_to_weierstrass(params)


def brute_count(ainvs, p):
    a1, a2, a3, a4, a6 = [int(a) % p for a in ainvs]
    n = 1
    for x in range(p):
        for y in range(p):
            if (y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6) % p == 0:
                n += 1
    return n


def test_count_fiber_weierstrass_against_brute():
    s = SurfaceQT.weierstrass(1, T, 1, T * T - 3, T + 5)
    for p in (3, 5, 7, 13):
        for t in range(p):
            fc = count_fiber(s, t, p)
            E = [c(t) for c in s.a]
            if not fc.bad:
                assert fc.N == brute_count(E, p)
                assert fc.a == p + 1 - fc.N
            else:
                assert fc.a == 0


def test_count_fiber_discriminant_form():
    f = BiPoly.from_x_coeffs([T, Poly.const(0), Poly.const(0), Poly.const(1)])  # x^3 + T
    s = SurfaceQT.discriminant_form(f)
    fc = count_fiber(s, 0, 7)
    assert fc.bad  # x^3 has a repeated root
    fc = count_fiber(s, 2, 7)
    assert fc.N == brute_count((0, 0, 0, 0, 2), 7)


def test_errors():
    s = SurfaceQT.weierstrass(0, 0, 0, T, Poly.const(Fraction(1, 5)))
    with pytest.raises(UnsupportedCharacteristic):
        nagao_sum(s, 2)
    with pytest.raises(BadReduction):
        nagao_sum(s, 5)
    recs, skipped = nagao_table(s, [3, 5, 7], jobs=1)
    assert [r.p for r in recs] == [3, 7] and 5 in skipped


@pytest.mark.parametrize("p", [5, 7, 13, 29])
def test_double_sum_equals_fiber_sum(params, weier, p):
    disc = rank6_surface(params)
    assert nagao_sum(disc, p).minus_p_A == nagao_by_fibers(disc, p).minus_p_A
    assert nagao_sum(weier, p).minus_p_A == nagao_by_fibers(weier, p).minus_p_A


def test_rank_zero_families():
    cubic_plus_T = SurfaceQT.weierstrass(0, 0, 0, 0, T)
    assert rosen_silverman_partial(cubic_plus_T, 300).value == 0.0
    cubic_plus_Tx = SurfaceQT.weierstrass(0, 0, 0, T, 0)
    for p in (3, 5, 7, 11, 101):
        assert nagao_sum(cubic_plus_Tx, p).A == 0


def test_certificate(params):
    res = rank6_exact_certificate(params, 1009)
    assert res.passed and res.ledger == (0, 6048, 6) and res.total == 6 * 1009
    assert rank6_exact_certificate(params, 7).skipped
    assert certificate_bad_primes(params, 2003) == [5, 7, 11]


@pytest.mark.parametrize("p", [101, 211, 307])
def test_certificate_matches_double_sum(params, p):
    assert rank6_exact_certificate(params, p).total == nagao_sum(rank6_surface(params), p).minus_p_A


@pytest.mark.parametrize("p", [5, 13, 17, 101, 127, 193, 1009])
def test_epsilon_decomposition(params, weier, p):
    eb = weierstrass_epsilon(params, weier, p)
    assert eb.consistent


def test_epsilon_small_on_good_primes(params, weier):
    for p in (211, 401, 601, 809, 1009):
        eps = nagao_sum(weier, p).minus_p_A - 6 * p
        assert abs(eps) <= 4


def test_bad_rows_mask(weier):
    p = 101
    mask = bad_rows(weier, p)
    for t in range(p):
        assert bool(mask[t]) == count_fiber(weier, t, p).bad


def test_table_order_and_ledger(params):
    recs, skipped = nagao_table(rank6_surface(params), [29, 13, 17], expected=lambda p: 6 * p, jobs=2)
    assert [r.p for r in recs] == [13, 17, 29] and not skipped
    assert all(r.deviation == 0 for r in recs)
    buf = io.StringIO()
    write_ledger(recs, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "p,A_num,minus_p_A,expected,deviation"
    assert lines[1].startswith("13,")


def test_x3_plus_x_over_F5():
    s = SurfaceQT.weierstrass(0, 0, 0, Poly.const(1), 0)
    fc = count_fiber(s, 0, 5)
    assert fc.N == brute_count((0, 0, 0, 1, 0), 5)
    assert fc.a == 5 + 1 - fc.N


def test_hasse_bound(params, weier):
    import random

    rng = random.Random(5)
    for p in (5, 7, 11, 13, 53, 101):
        for _ in range(10):
            fc = count_fiber(weier, rng.randrange(p), p)
            if not fc.bad:
                assert fc.a * fc.a <= 4 * p


def test_x3_plus_Tx_vanishes_for_p_3_mod_4():
    from ellsurf.numth import primes_up_to

    s = SurfaceQT.weierstrass(0, 0, 0, T, 0)
    for p in primes_up_to(199):
        if p % 4 == 3:
            assert nagao_sum(s, p).A == 0
            assert nagao_by_fibers(s, p).A == 0
