import random
from fractions import Fraction

import pytest
import sympy

from ellsurf.construction import (
    InvalidRoots,
    NonSquareA,
    admissibility_check,
    biquadratic_surface,
    classify_rationality,
    higher_degree_d1_d2,
    quadratic_disc_at,
    quartic_special_points,
    quartic_variant_check,
    rank6_surface,
    rank6_to_weierstrass,
    reduce_short_model,
    roots_to_elementary,
    solve_rank6,
)
from ellsurf.numth import Poly, ShapeError, primes_up_to

X = Poly.x()


@pytest.fixture(scope="module")
def params():
    return solve_rank6([1, 2, 3, 4, 5, 6])


def test_elementary_values():
    assert roots_to_elementary([1, 2, 3, 4, 5, 6]) == (518400, -773136, 296296, -44473, 3003, -91)


@pytest.mark.parametrize("roots", [[1, 2, 3, 4, 5], [0, 1, 2, 3, 4, 5], [1, -1, 2, 3, 4, 5], [1, 1, 2, 3, 4, 5]])
def test_invalid_roots(roots):
    with pytest.raises(InvalidRoots):
        solve_rank6(roots)


def test_elementary_against_sympy():
    rng = random.Random(3)
    x = sympy.Symbol("x")
    for _ in range(10):
        roots = rng.sample(range(1, 40), 6)
        prod = sympy.Poly(sympy.prod([x - r * r for r in roots]), x).all_coeffs()[::-1]
        assert list(roots_to_elementary(roots)) == [int(c) for c in prod[:6]]


def test_D_T_factors_over_roots():
    rng = random.Random(4)
    for _ in range(10):
        roots = rng.sample(range(-30, 31), 6)
        if 0 in roots or len({r * r for r in roots}) < 6:
            continue
        p = solve_rank6(roots)
        D = p.D_T()
        assert D.degree == 6 and D.lead == p.A
        for r in roots:
            assert D(r * r) == 0


def test_admissibility_report(params):
    rep = admissibility_check(params)
    assert rep.t1 == 2985983999 and rep.t2 == -2985984001
    assert rep.admissible
    assert rep.D_t1 == 4291243480243836561123092143580209905401856
    assert rep.D_t2 == -654033812589698788158285266298273805992198144
    assert not rep.cofactors
    small = sorted(p for p in rep.bad_primes if p < 2100)
    assert small == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 67, 73, 83,
                     97, 103, 107, 109, 127, 193]
    # t1, t2 are the two roots of t^2 + 2t - A + 1
    for t in (rep.t1, rep.t2):
        assert t * t + 2 * t - params.A + 1 == 0


def test_printed_second_discriminant_is_at_plus_sqrt_A_plus_one(params):
    """The printed companion value of D(t1) is D(sqrt(A) + 1), with its listed factors."""
    v = quadratic_disc_at(params, params.sqrt_A + 1)
    assert v == 4291243816662452751895093255391719515488256
    m = v
    for q, e in {2: 33, 3: 12, 7: 1, 11: 1, 13: 1, 41: 1, 173: 1, 17389: 1, 805873: 1, 9447850813: 1}.items():
        m, r = divmod(m, q**e)
        assert r == 0
    assert m == 1


def test_non_square_A():
    # hand-built parameters with A = 512, not a square
    p = solve_rank6([1, 2, 3, 4, 5, 6])
    fake = type(p)(p.roots, (2,) + p.R[1:], p.a, p.b, p.c, 512, p.B, p.C, p.D)
    with pytest.raises(NonSquareA):
        admissibility_check(fake)


def test_surfaces_and_weierstrass_identity(params):
    disc = rank6_surface(params)
    weier = rank6_to_weierstrass(params)
    assert disc.form == "discriminant" and weier.form == "weierstrass"
    # the Weierstrass cubic is k^2 f(x/k, t) with k = t^2 + 2t - A + 1
    for t in (0, 1, -3, 7):
        k = t * t + 2 * t - params.A + 1
        f = params.f().at_T(t)
        _, a2, _, a4, a6 = [c(t) for c in weier.a]
        for x in (0, 1, -2, 5):
            assert x**3 + a2 * x * x + a4 * x + a6 == k * k * f(Fraction(x, k))


def test_rationality_classification():
    T = Poly.x()
    assert classify_rationality(Poly((0, 0, 0, 1)), Poly((1, 0, 0, 0, 0, 1))) == "rational"
    assert classify_rationality(Poly((0,) * 8 + (1,)), Poly((1,) * 13)) == "undetermined"
    # T^2 x^3 + ... : a common u(T) = T is divided out before the degree test
    assert reduce_short_model(T**4 * 16, T**6 * 64) == (Poly.const(16), Poly.const(64))
    assert classify_rationality(T**5 * 3, T**6 * (T + 2)) == "rational"


def test_quartic_variant():
    x = Poly.x()
    with pytest.raises(ValueError):
        quartic_variant_check(x**4 + x, -(x**4), 1)
    with pytest.raises(ShapeError):
        quartic_variant_check(x**3 + 1, -(x**4), 1)
    rep = quartic_variant_check(x**4 + x + 1, -(x**4) + x * x, 1)
    assert rep.D == (x**4 + x + 1) ** 2 + x**4 * (-(x**4) + x * x)


def test_biquadratic_special_points():
    # before the common factor (x - 2)^2:
    # x = 1: A = B = 0, C = 4;  x = -1: A = C = 0, B = 9;  x = 0: B^2 = 4AC, A = 1
    w = (X - 2) ** 2
    A = (1 - X * X) * w
    B = Poly((2, Fraction(-9, 2), Fraction(5, 2))) * w
    C = (X + 1) ** 2 * w
    pts = quartic_special_points(A, B, C)
    s = biquadratic_surface(A, B, C)
    assert all(s.contains(P) for P in pts)
    T = Poly.x()
    got = {P.x(0): P.y for P in pts}
    assert set(got) == {-1, 0, 1}
    assert got[1] == Poly.const(2)
    assert got[-1] == 9 * T
    assert got[0] == 2 * (T * T + 1)


def test_rank7_point_from_quadratic_disc():
    from ellsurf import catalog

    e = catalog.get("rank7")
    Aq, Bq, Cq = e.surface.meta["A"], e.surface.meta["B"], e.surface.meta["C"]
    # disc of A s^2 + 4B s + 4C is 16(B^2 - AC); it vanishes at 65/7
    assert (Bq * Bq - Aq * Cq)(Fraction(65, 7)) == 0
    assert any(P.x == Poly.const(Fraction(65, 7)) for P in e.points)


def test_higher_degree_shape():
    with pytest.raises(ShapeError):
        higher_degree_d1_d2(X**3, Poly(), Poly(), Poly(), Poly.const(1))


def test_higher_degree_negative():
    # f(x0, T) not a square for any x0: nothing is certified
    A, E = Poly.const(1), Poly.const(1)
    rep = higher_degree_d1_d2(A, Poly.const(1), Poly.const(0), Poly.const(0), E)
    assert rep.squares == ()


def test_prime_sets_are_primes(params):
    rep = admissibility_check(params)
    ps = set(primes_up_to(10**4))
    assert all(p in ps for p in rep.bad_primes if p < 10**4)


def test_rationality_degree_twelve_and_catalog():
    T = Poly.x()
    assert classify_rationality(T**4 + 1, T**6 + 2) == "rational"
    # leading terms cancel in 4A^3 + 27B^2: the discriminant drops degree
    assert classify_rationality(-3 * T**4, 2 * T**6 + 1) == "undetermined"
    from ellsurf import catalog
    from ellsurf.cli import _rationality

    assert _rationality(catalog.get("rank8").surface) == "undetermined"
    assert classify_rationality(*rank6_to_weierstrass(solve_rank6([1, 2, 3, 4, 5, 6])).short_form()) == "rational"
