"""``aidlab`` command line.

Exit codes: 0 when the requested check passes, 1 when it fails, 2 for usage or
configuration errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .aid import (
    AidCoords,
    NormalizationError,
    NotApplicable,
    certify_aid,
    independence_check,
    make_Dij,
    normalize_aid,
    solve_ad_at,
    y_schedule,
)
from .algebra import AlgSpec, Variant, bracket, make_spec
from .derivations import (
    CentDerForm,
    DMap,
    ShapeError,
    check_derivation,
    classify_DL1,
    classify_DS,
    make_ad,
    make_cent_der,
    project_to_DS,
)
from .persist import Session, dmap_to_json, jsonable
from .suite import SuiteConfig, gram_preset, run_suite
from .textio import ParseError, format_element, parse_basis, parse_element, parse_lpoly

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def read_gram_file(path: str | Path) -> list[list[Fraction]]:
    """Rows of rationals separated by spaces or commas; ``#`` starts a comment."""
    rows = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].replace(",", " ").strip()
        if line:
            rows.append([Fraction(tok) for tok in line.split()])
    if not rows:
        raise UsageError(f"{path}: no Gram rows")
    return rows


def resolve_gram(text: str, rank: int):
    if text.startswith("preset:"):
        return gram_preset(text[len("preset:"):], rank)
    return read_gram_file(text)


def build_spec(args, variant: str | None = None) -> AlgSpec:
    if args.session:
        spec = Session.load(args.session).spec
        return spec if variant is None else spec.with_variant(variant)
    gram = resolve_gram(args.gram, args.rank)
    return make_spec(args.rank, gram, variant or args.variant)


def _int_pair(text: str) -> tuple[int, int]:
    try:
        i, j = text.split(",")
        return int(i), int(j)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected 'i,j', got {text!r}") from exc


def build_map(args, spec: AlgSpec) -> DMap:
    N = args.window
    chosen = [s for s in ("ad", "dij", "cent", "map", "image") if getattr(args, s, None)]
    if len(chosen) != 1:
        raise UsageError("give exactly one of --ad, --dij, --cent, --map, --image")
    if args.ad:
        return make_ad(spec, parse_element(args.ad, spec), N)
    if args.dij:
        i, j = args.dij
        return make_Dij(spec, i, j, N)
    if args.cent:
        k, f = args.cent
        return make_cent_der(spec, CentDerForm(int(k), parse_lpoly(f)), N)
    if args.map:
        if not args.session:
            raise UsageError("--map needs --session")
        maps = Session.load(args.session).maps
        if args.map not in maps:
            raise UsageError(f"no map {args.map!r} in the session (have {sorted(maps)})")
        return maps[args.map]
    images = {}
    for item in args.image:
        if "=" not in item:
            raise UsageError(f"--image expects 'basis=element', got {item!r}")
        b, e = item.split("=", 1)
        images[parse_basis(b, spec)] = parse_element(e, spec)
    return DMap(spec, N, images)


def _schedule(args):
    return y_schedule(args.window, args.ywindow_cap)


# -- output ---------------------------------------------------------------------------


def emit(args, payload: dict, text: str) -> None:
    out = json.dumps(jsonable(payload), indent=2, sort_keys=True) if args.format == "json" else text
    if args.out:
        Path(args.out).write_text(out + "\n")
    else:
        print(out)


def _map_text(D: DMap) -> str:
    lines = [f"{b} -> {format_element(e)}" for b, e in D.images.items() if e]
    return "\n".join(lines) if lines else "0"


# -- verbs ----------------------------------------------------------------------------


def cmd_spec_validate(args) -> int:
    spec = build_spec(args)
    emit(args, {"spec": spec, "valid": True},
         f"valid: rank {spec.rank}, variant {spec.variant.value}, gram "
         + "; ".join(" ".join(str(v) for v in row) for row in spec.gram.rows))
    return EXIT_OK


def cmd_bracket(args) -> int:
    spec = build_spec(args)
    X, Y = parse_element(args.X, spec), parse_element(args.Y, spec)
    Z = bracket(spec, X, Y)
    emit(args, {"X": X, "Y": Y, "bracket": Z}, format_element(Z))
    return EXIT_OK


def cmd_der_check(args) -> int:
    spec = build_spec(args)
    D = build_map(args, spec)
    res = check_derivation(spec, D)
    if res.ok:
        emit(args, {"ok": True, "checked": res.checked, "skipped": res.skipped},
             f"derivation on the window ({res.checked} pairs checked, {res.skipped} leave it)")
        return EXIT_OK
    a, b, lhs, rhs = res.counterexample
    emit(args, {"ok": False, "pair": [a, b], "lhs": lhs, "rhs": rhs},
         f"not a derivation: pair ({a}, {b}) gives {format_element(lhs)} != {format_element(rhs)}")
    return EXIT_FAIL


def cmd_der_split(args) -> int:
    spec = build_spec(args, "loop")
    D = build_map(args, spec)
    d, delta = project_to_DS(spec, D)
    emit(args, {"d": d, "delta": delta}, f"d:\n{_map_text(d)}\ndelta:\n{_map_text(delta)}")
    return EXIT_OK


def cmd_der_classify(args) -> int:
    spec = build_spec(args, "loop")
    D = build_map(args, spec)
    d, delta = project_to_DS(spec, D)
    try:
        coords = classify_DS(spec, d)
        fs = classify_DL1(spec, delta)
    except ShapeError as exc:
        emit(args, {"ok": False, "error": str(exc), "vector": exc.vector}, f"shape error: {exc}")
        return EXIT_FAIL
    emit(
        args,
        {"ok": True, "even": coords.even, "odd": coords.odd, "f": fs},
        "\n".join([f"even {k}: {v}" for k, v in coords.even.items()]
                  + [f"odd {k}: {v}" for k, v in coords.odd.items()]
                  + [f"f_{k}: {f}" for k, f in enumerate(fs, start=1)]),
    )
    return EXIT_OK


def cmd_aid_make_dij(args) -> int:
    spec = build_spec(args, "affine")
    D = make_Dij(spec, args.i, args.j, args.window)
    if args.out and args.format == "json":
        Session(spec, maps={f"D_{args.i},{args.j}": D}).save(args.out)
        return EXIT_OK
    emit(args, {"spec": spec, "map": dmap_to_json(D)}, _map_text(D))
    return EXIT_OK


def cmd_aid_solve(args) -> int:
    spec = build_spec(args, "affine")
    D = build_map(args, spec)
    X = parse_element(args.X, spec)
    res = None
    for M in _schedule(args):
        res = solve_ad_at(spec, D, X, M)
        if res.solved or res.structural:
            break
    payload = {"status": res.status, "witness": res.witness, "window_tried": res.window_tried,
               "freedom_dim": res.freedom_dim, "certificate": res.certificate}
    text = res.status
    if res.solved:
        text += f": Y = {format_element(res.witness)}"
    elif res.certificate is not None:
        text += f": no Y reaches {res.certificate}"
    emit(args, payload, text)
    return EXIT_OK if res.solved else EXIT_FAIL


def cmd_aid_certify(args) -> int:
    spec = build_spec(args, "affine")
    D = build_map(args, spec)
    rep = certify_aid(spec, D, args.strategy.split(","), count=args.count, seed=args.seed,
                      ywindow_cap=args.ywindow_cap)
    payload = {"verdict": rep.verdict, "probes": len(rep.probes), "witness": rep.witness,
               "certificate": rep.certificate,
               "unsolved": [X for X, _ in rep.unsolved()]}
    text = f"{rep.verdict} ({len(rep.probes)} probes)"
    if rep.refuted:
        text += f": X = {format_element(rep.witness)}, unreachable {rep.certificate}"
    emit(args, payload, text)
    return EXIT_OK if rep.certified else EXIT_FAIL


def cmd_aid_normalize(args) -> int:
    spec = build_spec(args, "affine")
    D = build_map(args, spec)
    try:
        coords: AidCoords = normalize_aid(spec, D, schedule=_schedule(args))
    except NormalizationError as exc:
        emit(args, {"ok": False, "error": str(exc)}, f"no normal form: {exc}")
        return EXIT_FAIL
    text = "\n".join([f"a_{i},{j} = {c}" for (i, j), c in coords.a.items()]
                     + [f"y = {format_element(coords.y)}"])
    emit(args, {"ok": True, "a": coords.a, "y": coords.y}, text)
    return EXIT_OK


def cmd_aid_independence(args) -> int:
    spec = build_spec(args, "affine")
    idx = args.indices or [(i, j) for i in range(1, spec.rank + 1) for j in (-2, -1, 1, 2)
                           if abs(2 * j) <= args.window]
    M = args.ywindow_cap if args.ywindow_cap is not None else max(10, args.window)
    res = independence_check(spec, idx, args.window, M)
    text = "independent" if res.independent else f"dependent: {res.relations}"
    emit(args, {"independent": res.independent, "indices": res.indices, "relations": res.relations},
         text)
    return EXIT_OK if res.independent else EXIT_FAIL


def cmd_suite_run(args) -> int:
    data = {}
    if args.config:
        data = json.loads(Path(args.config).read_text())
    elif args.session:
        data = dict(Session.load(args.session).suite)
    # explicit flags override the file
    for key in ("rank", "window", "seed", "ywindow_cap"):
        if getattr(args, key) is not None:
            data[key] = getattr(args, key)
    if args.gram_given or "gram" not in data:
        data["gram"] = resolve_gram(args.gram, data.get("rank", 2))
    config = SuiteConfig.from_dict(data)
    if args.out and not Path(args.out).resolve().parent.is_dir():
        raise UsageError(f"cannot write report: {args.out}")
    report = run_suite(config)
    out = report.dumps() if args.format == "json" else report.text()
    if args.out:
        try:
            Path(args.out).write_text(out + "\n")
        except OSError as exc:
            raise UsageError(f"cannot write report: {exc}") from exc
    else:
        print(out)
    return EXIT_FAIL if report.failed else EXIT_OK


# -- parser ---------------------------------------------------------------------------


def _common(defaults: dict) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--rank", type=int, default=defaults.get("rank", 1))
    p.add_argument("--gram", default=None,
                   help="file of rational rows, or preset:identity / preset:a1")
    p.add_argument("--variant", choices=[v.value for v in Variant], default="affine")
    p.add_argument("--window", type=int, default=defaults.get("window", 6))
    p.add_argument("--ywindow-cap", type=int, default=None)
    p.add_argument("--seed", type=int, default=defaults.get("seed", 42))
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["json", "text"], default="text")
    p.add_argument("--session", default=None, help="session file providing the spec and maps")
    return p


def _map_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("map source")
    g.add_argument("--ad", metavar="Y", help="the inner derivation ad Y")
    g.add_argument("--dij", type=_int_pair, metavar="I,J")
    g.add_argument("--cent", nargs=2, metavar=("K", "F"), help="centroid derivation with index K and f(t)")
    g.add_argument("--map", metavar="NAME", help="named map from --session")
    g.add_argument("--image", action="append", metavar="B=E", help="explicit image, repeatable")


def build_parser() -> argparse.ArgumentParser:
    common = _common({})
    suite_common = _common({"rank": None, "window": None, "seed": None})
    parser = argparse.ArgumentParser(prog="aidlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"aidlab {__version__}")
    top = parser.add_subparsers(dest="group", required=True)

    spec_p = top.add_parser("spec").add_subparsers(dest="verb", required=True)
    spec_p.add_parser("validate", parents=[common]).set_defaults(func=cmd_spec_validate)

    br = top.add_parser("bracket", parents=[common])
    br.add_argument("X")
    br.add_argument("Y")
    br.set_defaults(func=cmd_bracket)

    der = top.add_parser("der").add_subparsers(dest="verb", required=True)
    for name, func in (("check", cmd_der_check), ("split", cmd_der_split), ("classify", cmd_der_classify)):
        p = der.add_parser(name, parents=[common])
        _map_flags(p)
        p.set_defaults(func=func)

    aid = top.add_parser("aid").add_subparsers(dest="verb", required=True)
    p = aid.add_parser("make-dij", parents=[common])
    p.add_argument("i", type=int)
    p.add_argument("j", type=int)
    p.set_defaults(func=cmd_aid_make_dij)
    p = aid.add_parser("solve", parents=[common])
    p.add_argument("X")
    _map_flags(p)
    p.set_defaults(func=cmd_aid_solve)
    p = aid.add_parser("certify", parents=[common])
    _map_flags(p)
    p.add_argument("--strategy", default="basis,random,adversarial")
    p.add_argument("--count", type=int, default=100)
    p.set_defaults(func=cmd_aid_certify)
    p = aid.add_parser("normalize", parents=[common])
    _map_flags(p)
    p.set_defaults(func=cmd_aid_normalize)
    p = aid.add_parser("independence", parents=[common])
    p.add_argument("indices", nargs="*", type=_int_pair, metavar="I,J")
    p.set_defaults(func=cmd_aid_independence)

    suite = top.add_parser("suite").add_subparsers(dest="verb", required=True)
    p = suite.add_parser("run", parents=[suite_common])
    p.add_argument("--config", default=None, help="JSON file of suite settings")
    p.set_defaults(func=cmd_suite_run)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.gram_given = args.gram is not None
    if args.gram is None:
        args.gram = "preset:identity"
    try:
        return args.func(args)
    except (UsageError, ParseError, NotApplicable, ValueError, ZeroDivisionError, OSError) as exc:
        print(f"aidlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
