from fractions import Fraction

import pytest

from ellsurf import catalog
from ellsurf.catalog import CatalogEntry, TranscriptionError, coefficient_digest
from ellsurf.curve import SingularCurve
from ellsurf.fibers import fiber_models, is_good_specialization, quartic_at, square_value_fiber
from ellsurf.numth import Poly, ShapeError
from ellsurf.serialize import (
    FormatError,
    dec_curve_q,
    dec_point_qt,
    dec_rat,
    dec_surface,
    digest,
    dumps,
    enc_curve_q,
    enc_point_qt,
    enc_rat,
    enc_surface,
)
from ellsurf.surface import RatPointQT

# guards against accidental edits of the transcribed coefficients and points
DIGESTS = {
    "thm2.3": "3d0cb7cecd915c77",
    "rank7-§4.2": "a73854b2beb7c5b9",
    "rank8-§4.3": "18a0672009457e1b",
    "dep10-§5": "eddf5ea2b57596cb",
}


@pytest.mark.parametrize("name", sorted(DIGESTS))
def test_digest(name):
    assert coefficient_digest(catalog.get(name)) == DIGESTS[name]


@pytest.mark.parametrize("alias,name", [("rank6", "thm2.3"), ("rank7", "rank7-§4.2"), ("rank8-s4.3", "rank8-§4.3"), ("dep10", "dep10-§5")])
def test_aliases(alias, name):
    assert catalog.get(alias).name == name


def test_unknown_name():
    with pytest.raises(KeyError):
        catalog.get("rank9")


def test_claimed_ranks():
    assert {e.name: e.claimed_rank for e in catalog.catalog()} == {
        "thm2.3": 6,
        "rank7-§4.2": 7,
        "rank8-§4.3": 8,
        "dep10-§5": 5,
    }
    assert [len(e.points) for e in catalog.catalog()] == [6, 7, 8, 10]


def test_corrupted_point_detected():
    e = catalog.get("rank7")
    bad = RatPointQT(e.points[0].x, e.points[0].y + 1)
    broken = CatalogEntry(e.name, e.surface, (bad,) + e.points[1:], e.claimed_rank, e.description)
    assert broken.verify() == [0]
    assert issubclass(TranscriptionError, AssertionError)


def test_rank7_meta_and_special_point():
    e = catalog.get("rank7")
    assert e.surface.meta
    x = Fraction(65, 7)
    T = Poly.x()
    y = (540000 * T * T - 2880000) * Fraction(1, 49)
    assert RatPointQT.of(x, y) in e.points


def test_fibers_map_points_onto_the_cubic():
    for name, t0 in [("rank7", 20), ("rank8", 1), ("dep10", 3)]:
        e = catalog.get(name)
        models = fiber_models(e, t0)
        assert models
        for m in models:
            for P in m.points:
                assert P.is_zero or m.curve.contains(P.x, P.y)


def test_fiber_errors():
    with pytest.raises(ShapeError):
        quartic_at(catalog.get("thm2.3"), 0)
    assert not is_good_specialization(catalog.get("dep10"), 1)
    with pytest.raises((SingularCurve, ValueError)):
        square_value_fiber(catalog.get("dep10"), 1)


# ---------------------------------------------------------------------------
# serialization


def test_rational_encoding():
    assert enc_rat(5) == "5"
    assert enc_rat(Fraction(-3, 4)) == {"num": "-3", "den": "4"}
    assert dec_rat({"num": "-3", "den": "4"}) == Fraction(-3, 4)
    assert dec_rat("12345678901234567890") == 12345678901234567890
    with pytest.raises(FormatError):
        dec_rat(1.5)
    with pytest.raises(FormatError):
        dec_rat(True)


@pytest.mark.parametrize("name", sorted(DIGESTS))
def test_surface_and_points_round_trip(name):
    e = catalog.get(name)
    s2 = dec_surface(enc_surface(e.surface))
    assert s2.form == e.surface.form
    if s2.form == "weierstrass":
        assert s2.a == e.surface.a
    else:
        assert s2.f == e.surface.f
    for P in e.points:
        assert dec_point_qt(enc_point_qt(P)) == P


def test_curve_round_trip_and_dumps():
    E = square_value_fiber(catalog.get("rank7"), 20).curve
    assert dec_curve_q(enc_curve_q(E)) == E
    text = dumps({"b": 1, "a": [enc_rat(Fraction(1, 3))]})
    assert text.endswith("\n") and text.index('"a"') < text.index('"b"')
    assert digest(text) == digest(text.encode())
