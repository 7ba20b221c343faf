"""ellsurf command line: construct, nagao, heights, transform, replay."""
from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
import time
from fractions import Fraction

from . import __version__, analytic, catalog
from .construction import (
    InvalidRoots,
    NonSquareA,
    admissibility_check,
    classify_rationality,
    rank6_surface,
    rank6_to_weierstrass,
    solve_rank6,
)
from .curve import NotOnCurve, SingularCurve, WeierstrassQ
from .fibers import FiberModel, fiber_models, leading_square_fiber, square_value_fiber, weierstrass_fiber
from .heights import default_precision, independence_test, normalization_scaling
from .numth import InvalidModulus, ShapeError, primes_up_to
from .serialize import (
    FormatError,
    dec_surface,
    digest,
    dumps,
    enc_curve_q,
    enc_float,
    enc_point,
    enc_point_qt,
    enc_rat,
    enc_surface,
)
from .transforms import (
    CannotNormalize,
    ExcludedPoint,
    depressed_quartic_to_cubic,
    minimal_model,
    quartic_jacobian_short,
    square_constant_quartic_to_cubic,
)

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2

DEFAULT_ROOTS = [1, 2, 3, 4, 5, 6]

# determinants printed alongside the catalog curves
DET_TARGETS = {"thm2.3": 880000.0, "rank7-§4.2": 37472.0, "rank8-§4.3": 124079248627.08}
DEFAULT_T0 = {"thm2.3": 0, "rank7-§4.2": 20, "rank8-§4.3": 1, "dep10-§5": 3}
DEFAULT_ROUTE = {"dep10-§5": "square+"}

RANK6_NAMES = {
    "rank6-discriminant": "discriminant",
    "rank6-disc": "discriminant",
    "rank6-weierstrass": "weierstrass",
    "rank6-weier": "weierstrass",
}


class InputError(Exception):
    pass


INPUT_ERRORS = (
    InputError,
    InvalidRoots,
    FormatError,
    ShapeError,
    SingularCurve,
    NotOnCurve,
    CannotNormalize,
    ExcludedPoint,
    InvalidModulus,
    json.JSONDecodeError,
    FileNotFoundError,
)


def _rat(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {s!r}") from None


def _pair(s: str) -> tuple[Fraction, Fraction]:
    parts = s.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected x,y but got {s!r}")
    return _rat(parts[0]), _rat(parts[1])


# ---------------------------------------------------------------------------
# curve sources


def _load_surface(spec: str, roots, form: str | None = None):
    """(surface, rank6 params or None, catalog entry or None) for a --curve value."""
    if spec in RANK6_NAMES:
        params = solve_rank6(roots)
        s = rank6_surface(params) if RANK6_NAMES[spec] == "discriminant" else rank6_to_weierstrass(params)
        return s, params, None
    if spec in catalog.ALIASES:
        entry = catalog.get(spec)
        return entry.surface, None, entry
    if not os.path.exists(spec):
        raise InputError(f"--curve {spec!r} is neither a known curve name nor a file")
    with open(spec) as fh:
        obj = json.load(fh)
    if "surfaces" in obj:
        key = form or "weierstrass"
        if key not in obj["surfaces"]:
            raise InputError(f"{spec} has no surface {key!r}; available {sorted(obj['surfaces'])}")
        params = None
        if "roots" in obj:
            params = solve_rank6([int(r) for r in obj["roots"]])
        return dec_surface(obj["surfaces"][key]), params, None
    if "form" in obj:
        return dec_surface(obj), None, None
    raise InputError(f"{spec} does not contain a curve")


def _rationality(surface) -> str:
    if surface.form == "weierstrass":
        A, B = surface.short_form()
    else:
        xc = surface.f.x_coeffs()
        if len(xc) != 5:
            return "undetermined"
        e, d, c, b, a = xc
        A, B = quartic_jacobian_short(a, b, c, d, e)
    try:
        return classify_rationality(A, B)
    except SingularCurve:
        return "singular"


# ---------------------------------------------------------------------------
# commands; each returns (outputs {name: text}, exit code)


def cmd_construct(args) -> tuple[dict, int]:
    if args.catalog:
        entry = catalog.get(args.catalog)
        doc = {
            "name": entry.name,
            "surface": enc_surface(entry.surface),
            "points": [enc_point_qt(P) for P in entry.points],
            "point_count": len(entry.points),
            "points_verified": not entry.verify(),
            "claimed_rank": entry.claimed_rank,
            "coefficient_digest": catalog.coefficient_digest(entry),
            "rationality": _rationality(entry.surface),
        }
        return {"json": dumps(doc)}, EXIT_OK

    params = solve_rank6(args.roots)
    disc = rank6_surface(params)
    weier = rank6_to_weierstrass(params)
    doc = {
        "roots": [str(r) for r in params.roots],
        "R": [str(r) for r in params.R],
        "params": {k: str(v) for k, v in params.as_dict().items()},
        "surfaces": {"discriminant": enc_surface(disc), "weierstrass": enc_surface(weier)},
        "rationality": _rationality(weier),
    }
    code = EXIT_OK
    try:
        rep = admissibility_check(params)
        doc["admissibility"] = {
            "t1": str(rep.t1),
            "t2": str(rep.t2),
            "D_t1": str(rep.D_t1),
            "D_t2": str(rep.D_t2),
            "bad_primes": [str(p) for p in sorted(rep.bad_primes)],
            "unfactored": {k: str(v) for k, v in sorted(rep.cofactors.items())},
            "admissible": rep.admissible,
        }
        if not rep.admissible:
            code = EXIT_FAILED
    except NonSquareA as e:
        doc["admissibility"] = {"admissible": False, "reason": str(e)}
        code = EXIT_FAILED
    return {"json": dumps(doc)}, code


def cmd_nagao(args) -> tuple[dict, int]:
    if args.pmax < 3:
        raise InputError("--pmax must be at least 3")
    surface, params, _ = _load_surface(args.curve, args.roots, args.form)
    family = params is not None
    primes = [p for p in primes_up_to(args.pmax) if p >= max(args.pmin, 3)]
    expected = (lambda p: 6 * p) if family else None
    recs, skipped = analytic.nagao_table(surface, primes, expected, jobs=args.jobs)

    buf = io.StringIO()
    analytic.write_ledger(recs, buf)
    ps = math.fsum(-float(r.A) * math.log(r.p) for r in recs) / args.pmax
    summary = {
        "curve": args.curve,
        "form": surface.form,
        "pmin": args.pmin,
        "pmax": args.pmax,
        "primes": len(recs),
        "skipped": {str(p): why for p, why in sorted(skipped.items())},
        "rosen_silverman_partial": enc_float(ps, 12),
    }
    code = EXIT_OK
    if family:
        bad = admissibility_check(params).bad_primes
        devs = [r.deviation for r in recs if r.p not in bad]
        summary["deviation_max_good"] = max((abs(d) for d in devs), default=0)
        summary["deviation_max_all"] = max((abs(r.deviation) for r in recs), default=0)
        summary["exact_matches"] = sum(1 for r in recs if r.deviation == 0)
    if args.exact_certificate:
        if not family:
            raise InputError("--exact-certificate needs a rank-6 family curve")
        cert_primes = [p for p in primes if p >= 5]
        results = [analytic.rank6_exact_certificate(params, p) for p in cert_primes]
        passed = sum(r.passed for r in results)
        rate = passed / len(results) if results else 1.0
        summary["certificate"] = {
            "primes": len(results),
            "passed": passed,
            "pass_rate": enc_float(rate, 6),
            "skipped": {str(r.p): r.skipped for r in results if r.skipped},
            "failed": [r.p for r in results if not r.passed and not r.skipped],
        }
        if rate < 0.99:
            code = EXIT_FAILED
    return {"csv": buf.getvalue(), "json": dumps(summary)}, code


def _fiber_for(args) -> tuple[FiberModel, str | None]:
    """Cubic model and points for cmd_heights / cmd_transform."""
    if args.ainvs:
        E = WeierstrassQ(*args.ainvs)
        pts = []
        for i, (x, y) in enumerate(args.points or []):
            try:
                pts.append(E.point(x, y))
            except NotOnCurve:
                raise NotOnCurve(f"point #{i} ({x}, {y}) is not on {E}") from None
        return FiberModel(E, pts, "given"), None
    if not args.curve:
        raise InputError("give --curve NAME or --ainvs a1 a2 a3 a4 a6")
    if args.curve in catalog.ALIASES:
        entry = catalog.get(args.curve)
    else:
        raise InputError(f"heights on {args.curve!r}: only catalog curves or --ainvs are supported")
    t0 = args.specialize if args.specialize is not None else DEFAULT_T0[entry.name]
    route = args.route or DEFAULT_ROUTE.get(entry.name, "auto")
    if entry.surface.form == "weierstrass":
        return weierstrass_fiber(entry, t0), entry.name
    if route == "auto":
        return None, entry.name
    if route in ("leading+", "leading-"):
        return leading_square_fiber(entry, t0, 1 if route.endswith("+") else -1), entry.name
    if route in ("square+", "square-"):
        return square_value_fiber(entry, t0, 0, 1 if route.endswith("+") else -1), entry.name
    raise InputError(f"unknown route {route!r}")


def _gram_doc(m: FiberModel, bits: int, tau: float) -> dict:
    res = independence_test(m.points, bits, tau)
    G = res.gram
    return {
        "route": m.route,
        "curve": enc_curve_q(m.curve),
        "points": [enc_point(P) for P in m.points],
        "gram": [[enc_float(v, 12) for v in row] for row in G.matrix],
        "det": enc_float(G.det, 12),
        "independent_count": res.independent_count,
        "independent_indices": res.independent_indices,
        "relations": res.relations,
        "inconclusive": res.inconclusive,
        "note": res.note,
    }


def cmd_heights(args) -> tuple[dict, int]:
    bits = args.precision or default_precision()
    m, name = _fiber_for(args)
    t0 = args.specialize if args.specialize is not None else DEFAULT_T0.get(name)
    if m is None:
        entry = catalog.get(name)
        docs = [_gram_doc(x, bits, args.tau) for x in fiber_models(entry, t0)]
    else:
        docs = [_gram_doc(m, bits, args.tau)]
    target = DET_TARGETS.get(name)
    if target is not None:
        for d in docs:
            k, err = normalization_scaling(d["det"], target, len(d["points"]))
            d["normalization"] = {
                "target": target,
                "scaling_exponent": k,
                "scaled_det": enc_float(d["det"] * 2.0**k, 12),
                "relative_error": enc_float(err, 6),
            }
        best = min(docs, key=lambda d: d["normalization"]["relative_error"])
    else:
        best = docs[0]
    out = dict(best)
    out["precision_bits"] = bits
    out["specialization"] = None if t0 is None else enc_rat(t0)
    out["name"] = name
    if len(docs) > 1:
        out["routes"] = {d["route"]: d["det"] for d in docs}
    code = EXIT_OK if not best["inconclusive"] else EXIT_FAILED
    return {"json": dumps(out)}, code


def cmd_transform(args) -> tuple[dict, int]:
    doc: dict = {"mode": args.mode}
    if args.mode == "depressed":
        cubic, pmap = depressed_quartic_to_cubic(args.c, args.d, args.e)
        doc["g2"], doc["g3"] = enc_rat(cubic.g2), enc_rat(cubic.g3)
        doc["curve"] = enc_curve_q(cubic.weierstrass())
        quartic = lambda x: x**4 - 6 * args.c * x * x + 4 * args.d * x + args.e  # noqa: E731
    elif args.mode == "square-const":
        E, pmap = square_constant_quartic_to_cubic(args.a, args.b, args.c, args.d, args.q)
        doc["curve"] = enc_curve_q(E)
        quartic = lambda u: args.a * u**4 + args.b * u**3 + args.c * u * u + args.d * u + args.q**2  # noqa: E731
    else:
        m, _ = _fiber_for(args)
        if m is None:
            raise InputError("--mode minimal on a quartic curve needs --route")
        Emin, iso = minimal_model(m.curve)
        doc["source"] = enc_curve_q(m.curve)
        doc["curve"] = enc_curve_q(Emin)
        doc["isomorphism"] = {k: enc_rat(getattr(iso, k)) for k in ("u", "r", "s", "t")}
        if Emin.a1 == 0 and Emin.a3 == 0:
            doc["alpha"], doc["beta"] = enc_rat(-Emin.a4), enc_rat(Emin.a6)
        doc["points"] = [enc_point(iso.map_point(P, Emin)) for P in m.points]
        return {"json": dumps(doc)}, EXIT_OK

    if args.point is not None:
        x, y = args.point
        if y * y != quartic(x):
            raise NotOnCurve(f"point ({x}, {y}) is not on the quartic")
        img = pmap.forward((x, y))
        doc["image"] = "infinity" if img is None else {"x": enc_rat(img[0]), "y": enc_rat(img[1])}
        back = pmap.inverse(img)
        doc["round_trip"] = back == (x, y)
        if not doc["round_trip"]:
            return {"json": dumps(doc)}, EXIT_FAILED
    return {"json": dumps(doc)}, EXIT_OK


COMMANDS = {
    "construct": cmd_construct,
    "nagao": cmd_nagao,
    "heights": cmd_heights,
    "transform": cmd_transform,
}


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ellsurf", description="Elliptic surfaces of high rank: build and verify.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def outputs(p, csv=False):
        p.add_argument("--out", help="write the JSON result here instead of stdout")
        p.add_argument("--manifest", help="run manifest path (default: OUT.manifest.json, or stderr)")
        if csv:
            p.add_argument("--ledger", help="per-prime CSV ledger path (default: stdout)")

    p = sub.add_parser("construct", help="rank-6 surface from roots, or a catalog curve")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--roots", type=int, nargs=6, metavar="RHO")
    g.add_argument("--catalog", metavar="NAME")
    outputs(p)

    p = sub.add_parser("nagao", help="Nagao sums, certificate and partial rank sums")
    p.add_argument("--curve", required=True, help="catalog name, rank6-discriminant, rank6-weierstrass, or JSON file")
    p.add_argument("--roots", type=int, nargs=6, default=DEFAULT_ROOTS, metavar="RHO")
    p.add_argument("--form", choices=["weierstrass", "discriminant"], help="surface to take from a construct file")
    p.add_argument("--pmin", type=int, default=3)
    p.add_argument("--pmax", type=int, required=True)
    p.add_argument("--exact-certificate", action="store_true")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    outputs(p, csv=True)

    def fiber_args(p):
        p.add_argument("--curve", help="catalog name")
        p.add_argument("--ainvs", type=_rat, nargs=5, metavar="A")
        p.add_argument("--points", type=_pair, nargs="+", metavar="X,Y")
        p.add_argument("--specialize", type=_rat, metavar="T0")
        p.add_argument("--route", choices=["auto", "leading+", "leading-", "square+", "square-"])

    p = sub.add_parser("heights", help="height Gram matrix and independence")
    fiber_args(p)
    p.add_argument("--precision", type=int, help="working bits (default ELLSURF_PRECISION_BITS or 128)")
    p.add_argument("--tau", type=float, default=1e-6)
    outputs(p)

    p = sub.add_parser("transform", help="quartic to cubic maps and minimal models")
    p.add_argument("--mode", required=True, choices=["depressed", "square-const", "minimal"])
    for k in ("a", "b", "c", "d", "e", "q"):
        p.add_argument(f"--{k}", type=_rat, default=Fraction(0))
    p.add_argument("--point", type=_pair, metavar="X,Y")
    fiber_args(p)
    outputs(p)

    p = sub.add_parser("replay", help="re-run a manifest and compare output digests")
    p.add_argument("manifest")
    return ap


# ---------------------------------------------------------------------------
# running, manifests, replay


def _run(args) -> tuple[dict, int, dict]:
    t = time.perf_counter()
    outs, code = COMMANDS[args.command](args)
    return outs, code, {args.command: round(time.perf_counter() - t, 3)}


def _manifest(argv, args, outs, timings) -> dict:
    arguments = {k: v for k, v in vars(args).items() if k not in ("command",)}
    return {
        "command": args.command,
        "argv": list(argv),
        "arguments": json.loads(json.dumps(arguments, default=str)),
        "seed_constants": {
            "precision_bits": getattr(args, "precision", None) or default_precision(),
            "float_digits": 12,
            "numba": analytic.kernels.BACKEND,
        },
        "tool_version": __version__,
        "timings": timings,
        "output_digests": {k: digest(v) for k, v in sorted(outs.items())},
    }


def _write(path, text, stream):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        stream.write(text)


def _replay(path: str) -> int:
    with open(path) as fh:
        man = json.load(fh)
    args = build_parser().parse_args(man["argv"])
    outs, _, _ = _run(args)
    got = {k: digest(v) for k, v in sorted(outs.items())}
    same = got == man["output_digests"]
    print(dumps({"manifest": path, "reproduced": same, "digests": got}), end="")
    return EXIT_OK if same else EXIT_FAILED


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    try:
        if args.command == "replay":
            return _replay(args.manifest)
        outs, code, timings = _run(args)
    except INPUT_ERRORS as e:
        print(f"ellsurf: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except KeyError as e:
        print(f"ellsurf: error: {e.args[0] if e.args else e}", file=sys.stderr)
        return EXIT_INPUT

    if "csv" in outs:
        _write(args.ledger, outs["csv"], sys.stdout)
        if not args.out:
            # keep stdout a clean CSV when both go to the terminal
            _write(None, outs["json"], sys.stderr if not args.ledger else sys.stdout)
        else:
            _write(args.out, outs["json"], sys.stdout)
    else:
        _write(args.out, outs["json"], sys.stdout)

    man = dumps(_manifest(argv, args, outs, timings))
    mpath = args.manifest or (args.out + ".manifest.json" if args.out else None)
    _write(mpath, man, sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
