import random
from fractions import Fraction

import mpmath
import pytest

from ellsurf.curve import SingularCurve, WeierstrassQ
from ellsurf.heights import (
    PrecisionError,
    canonical_height,
    default_precision,
    doubling_limit_height,
    gram,
    height_pairing,
    independence_test,
    normalization_scaling,
    to_minimal,
    torsion_check,
)

E37 = WeierstrassQ(0, 0, 1, -1, 0)
E389 = WeierstrassQ(0, 1, 1, -2, 0)


def test_37a_generator():
    # published value 0.0511114082... in the normalization twice this one
    h = canonical_height(E37.point(0, 0), 128)
    assert abs(h - mpmath.mpf("0.0255557041199844")) < 1e-14


def test_389a_regulator():
    # published regulator 0.152460177943144; 2x2 Gram scales by 2^2
    G = gram([E389.point(-1, 1), E389.point(0, 0)], 128)
    assert abs(G.det * 4 - mpmath.mpf("0.152460177943144")) < 1e-12
    assert G.rank == 2


def random_curves_with_points(n, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        a1, a3 = rng.randint(0, 1), rng.randint(0, 1)
        a2, a4 = rng.randint(-3, 3), rng.randint(-40, 40)
        x, y = rng.randint(-9, 9), rng.randint(-30, 30)
        a6 = y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x
        try:
            E = WeierstrassQ(a1, a2, a3, a4, a6)
        except SingularCurve:
            continue
        P = E.point(x, y)
        if torsion_check(P).torsion:
            continue
        out.append(P)
    return out


def test_against_doubling_limit():
    for P in random_curves_with_points(8, 1):
        h = float(canonical_height(P, 128))
        ref = doubling_limit_height(P, 7)
        assert abs(h - ref) <= 2e-4 * h


def test_quadratic_form_random_curves():
    pts = random_curves_with_points(25, 2)
    for P in pts:
        h = canonical_height(P, 128)
        for m in (2, 3, 5):
            assert abs(canonical_height(P * m, 128) / (m * m * h) - 1) < 1e-12


def test_parallelogram_and_pairing():
    P, Q = E389.point(-1, 1), E389.point(0, 0)
    with mpmath.workprec(128):  # the comparisons themselves need the bits
        hP, hQ = canonical_height(P), canonical_height(Q)
        lhs = canonical_height(P + Q) + canonical_height(P - Q)
        assert abs(lhs - 2 * hP - 2 * hQ) < 1e-30
        assert abs(height_pairing(P, P) - hP) < 1e-30
        assert abs(height_pairing(P, Q * 3) - 3 * height_pairing(P, Q)) < 1e-30


def test_torsion_points():
    E = WeierstrassQ.short(0, 1)
    for xy, n in [((2, 3), 6), ((0, 1), 3), ((-1, 0), 2)]:
        P = E.point(*xy)
        assert torsion_check(P).order == n
        assert canonical_height(P) == 0
    assert torsion_check(E.zero()).order == 1
    assert not torsion_check(E37.point(0, 0)).torsion


def test_minimal_model_invariance():
    P = E37.point(0, 0) * 3
    F = E37.change_coords(Fraction(1, 6), 2, 1, -3)
    # the point (x, y) on E37 in the coordinates of F
    u, r, s, t = Fraction(1, 6), 2, 1, -3
    xp = (P.x - r) / u**2
    yp = (P.y - s * (P.x - r) - t) / u**3
    Q = F.point(xp, yp)
    with mpmath.workprec(128):
        assert abs(canonical_height(Q) - canonical_height(P)) < 1e-30
    assert to_minimal(Q).curve == E37


def test_independence_relations():
    P = E37.point(0, 0)
    res = independence_test([P, P * 2], 128)
    assert res.independent_count == 1
    assert res.relations in ([[2, -1]], [[-2, 1]])
    E = WeierstrassQ.short(0, 17)
    pts = [E.point(-2, 3), E.point(-1, 4), E.point(2, 5), E.point(4, 9), E.point(8, 23)]
    res = independence_test(pts, 128)
    assert res.independent_count == 2 and len(res.relations) == 3
    for vec in res.relations:
        acc = E.zero()
        for v, Pt in zip(vec, pts):
            acc = acc + Pt * v
        assert acc.is_zero


def test_precision_env(monkeypatch):
    monkeypatch.setenv("ELLSURF_PRECISION_BITS", "200")
    assert default_precision() == 200
    monkeypatch.setenv("ELLSURF_PRECISION_BITS", "16")
    with pytest.raises(PrecisionError):
        default_precision()
    monkeypatch.delenv("ELLSURF_PRECISION_BITS")
    assert default_precision() == 128


def test_normalization_scaling():
    assert normalization_scaling(13838.539126512293, 880000, 6)[0] == 6
    assert normalization_scaling(880000 * 64, 880000, 6)[0] == -6
    k, err = normalization_scaling(880000, 880000, 6)
    assert (k, err) == (0, 0)
