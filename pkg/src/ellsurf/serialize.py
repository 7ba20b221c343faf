"""JSON wire format: exact numbers as strings, floats rounded before output."""
from __future__ import annotations

import hashlib
import json
from fractions import Fraction

import mpmath

from .curve import CurvePoint, WeierstrassQ
from .numth import BiPoly, Poly
from .surface import DISCRIMINANT, WEIERSTRASS, RatPointQT, SurfaceQT

FLOAT_DIGITS = 15


class FormatError(ValueError):
    pass


def enc_rat(v) -> str | dict:
    """Integers become decimal strings; other rationals {"num", "den"}."""
    v = Fraction(v)
    if v.denominator == 1:
        return str(v.numerator)
    return {"num": str(v.numerator), "den": str(v.denominator)}


def dec_rat(obj) -> Fraction:
    if isinstance(obj, dict):
        return Fraction(int(obj["num"]), int(obj["den"]))
    if isinstance(obj, bool):
        raise FormatError(f"not a rational: {obj!r}")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, str):
        return Fraction(obj)
    raise FormatError(f"not an exact rational: {obj!r}")


def enc_poly(p: Poly) -> list:
    return [enc_rat(c) for c in p.c]


def dec_poly(obj) -> Poly:
    if not isinstance(obj, list):
        return Poly.const(dec_rat(obj))
    return Poly(dec_rat(c) for c in obj)


def enc_float(v, digits: int = FLOAT_DIGITS) -> float:
    if isinstance(v, mpmath.mpf):
        return float(mpmath.nstr(v, digits))
    return float(f"{float(v):.{digits}g}")


def enc_surface(s: SurfaceQT) -> dict:
    if s.form == WEIERSTRASS:
        coeffs = [enc_poly(c) for c in s.a]
    else:
        coeffs = [enc_poly(c) for c in s.f.x_coeffs()]
    return {"form": s.form, "coeffs": coeffs, "provenance": s.provenance}


def dec_surface(obj: dict) -> SurfaceQT:
    try:
        form = obj["form"]
        coeffs = [dec_poly(c) for c in obj["coeffs"]]
    except (KeyError, TypeError) as e:
        raise FormatError(f"malformed curve object: {e}") from None
    prov = obj.get("provenance", "")
    if form == WEIERSTRASS:
        if len(coeffs) != 5:
            raise FormatError("weierstrass form needs five coefficients a1 a2 a3 a4 a6")
        return SurfaceQT.weierstrass(*coeffs, provenance=prov)
    if form == DISCRIMINANT:
        return SurfaceQT.discriminant_form(BiPoly.from_x_coeffs(coeffs), provenance=prov)
    raise FormatError(f"unknown curve form {form!r}")


def enc_point_qt(P: RatPointQT) -> dict:
    return {"x": enc_poly(P.x), "y": enc_poly(P.y)}


def dec_point_qt(obj: dict) -> RatPointQT:
    return RatPointQT(dec_poly(obj["x"]), dec_poly(obj["y"]))


def enc_curve_q(E: WeierstrassQ) -> dict:
    return {"form": "weierstrass-Q", "ainvs": [enc_rat(a) for a in E.ainvs]}


def dec_curve_q(obj: dict) -> WeierstrassQ:
    return WeierstrassQ(*(dec_rat(a) for a in obj["ainvs"]))


def enc_point(P: CurvePoint) -> dict | str:
    if P.is_zero:
        return "infinity"
    return {"x": enc_rat(P.x), "y": enc_rat(P.y)}


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def digest(text: str | bytes) -> str:
    if isinstance(text, str):
        text = text.encode()
    return hashlib.sha256(text).hexdigest()
