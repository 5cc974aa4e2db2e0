"""Command line front-end.

Exit codes: 0 success, 1 parse or usage error, 2 mathematical failure.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import generate as gen
from .chain import betti_fraction_field, homology_dvr
from .cube import PresentedCube, h0_iterated, is_koszul, subset_key, total_complex, validate
from .errors import InvalidParams, InvalidType, KoszulError, MathError, NoTypicalForm, ParseError, UnknownSuite
from .io import document_from_cube, dumps_json, load_cube, morphism_block
from .normalize import normalize_simple
from .ring import BaseField, RegularContext
from .suites import SUITES, Params, run_suite, zero_map_certificate
from .typical import TypicalType, make_typical

EXIT_OK, EXIT_PARSE, EXIT_MATH = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_PARSE)


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _emit(report: dict, fmt: str, out=None):
    out = out or sys.stdout
    if fmt == "json":
        out.write(dumps_json(report))
    else:
        for line in _text_lines(report):
            out.write(line + "\n")


def _text_lines(obj, indent: int = 0):
    pad = "  " * indent
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat_list(v):
                yield f"{pad}{k}:"
                yield from _text_lines(v, indent + 1)
            else:
                yield f"{pad}{k}: {_scalar_text(v)}"
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat_list(v):
                yield f"{pad}-"
                yield from _text_lines(v, indent + 1)
            else:
                yield f"{pad}- {_scalar_text(v)}"
    else:
        yield pad + _scalar_text(obj)


def _flat_list(v) -> bool:
    return isinstance(v, list) and all(not isinstance(e, dict) for e in v)


def _scalar_text(v) -> str:
    if isinstance(v, bool):
        return "pass" if v else "FAIL"
    if isinstance(v, list):
        return json.dumps(v, ensure_ascii=False)
    if isinstance(v, dict):
        return "{}"
    return str(v)


def _presented(pc) -> dict:
    ctx = pc.ctx
    if isinstance(pc, PresentedCube):
        return {
            "quotient_by": list(pc.base),
            "presentations": {subset_key(ctx, t): pc.presentation(t).to_strings()
                              for t in pc.masks()},
            "boundaries": {f"{k}@{subset_key(ctx, t)}": pc.d(k, t).to_strings()
                           for t in pc.masks() for k in ctx.members(t)},
        }
    return {"quotient_by": list(getattr(pc, "base", ())),
            "ranks": {subset_key(ctx, t): pc.rank(t) for t in pc.masks()}}


# commands


def cmd_validate(args) -> tuple[dict, int]:
    _, cube = load_cube(args.file)
    bad = validate(cube)
    koszul, exps = is_koszul(cube) if not bad else (False, {})
    rep = {
        "command": "validate",
        "file": args.file,
        "face_laws": not bad,
        "violations": [str(v) for v in bad],
        "koszul": koszul,
        "annihilation_exponents": {str(s): e for s, e in exps.items()},
    }
    rep["ok"] = not bad and koszul
    return rep, EXIT_OK if rep["ok"] else EXIT_MATH


def cmd_normalize(args) -> tuple[dict, int]:
    _, cube = load_cube(args.file)
    try:
        res = normalize_simple(cube)
    except NoTypicalForm as e:
        return {"command": "normalize", "file": args.file, "ok": False,
                "error": "NoTypicalForm", "message": str(e),
                "signature": str(e.signature)}, EXIT_MATH
    t = res.type
    cert = {k: v for k, v in res.certificate.items() if k != "steps"}
    cert["h0_ranks"] = {str(s): v for s, v in cert["h0_ranks"].items()}
    return {
        "command": "normalize",
        "file": args.file,
        "type": str(t),
        "r": t.r,
        "n": {str(s): v for s, v in t.n},
        "theta": morphism_block(res.theta),
        "certificate": cert,
        "ok": res.ok,
    }, EXIT_OK if res.ok else EXIT_MATH


def _directions(text: str) -> list[int]:
    try:
        out = sorted({int(p) for p in text.split(",") if p.strip()})
    except ValueError:
        raise ParseError(f"bad direction set {text!r}") from None
    if not out:
        raise ParseError("empty direction set")
    return out


def cmd_homology(args) -> tuple[dict, int]:
    _, cube = load_cube(args.file)
    T = _directions(args.directions)
    h = h0_iterated(cube, T)
    return {"command": "homology", "file": args.file, "directions": T, **_presented(h),
            "ok": True}, EXIT_OK


def cmd_tot(args) -> tuple[dict, int]:
    _, cube = load_cube(args.file)
    tot = total_complex(cube)
    rep = {
        "command": "tot",
        "file": args.file,
        "ranks": {str(n): tot.rank(n) for n in tot.degrees()},
        "differentials": {str(n): tot.d(n).to_strings() for n in tot.degrees()
                          if tot.rank(n) and tot.rank(n - 1)},
    }
    if cube.ring.nvars == 1:
        rep["homology"] = {str(n): {"free_rank": f, "torsion_valuations": tv}
                           for n, (f, tv) in homology_dvr(tot).items() if f or tv}
        rep["method"] = "smith normal form over L_1"
    else:
        rep["homology_rank"] = {str(n): b for n, b in betti_fraction_field(tot).items() if b}
        rep["method"] = "fraction-field ranks"
    rep["ok"] = True
    return rep, EXIT_OK


def cmd_verify(args) -> tuple[dict, int]:
    rep = run_suite(args.suite, seed=args.seed, cases=args.cases,
                    params=Params(args.max_s, args.max_rank), jobs=args.jobs)
    if args.suite == "zero-map":
        rep["certificate"] = zero_map_certificate(args.seed)
        rep["ok"] = rep["ok"] and rep["certificate"]["valid"]
    return rep, EXIT_OK if rep["ok"] else EXIT_MATH


def _kv(params: list[str]) -> dict:
    out = {}
    for p in params:
        if "=" not in p:
            raise InvalidParams(f"expected key=value, got {p!r}")
        k, v = p.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _ints(text: str, what: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise InvalidParams(f"{what} must be comma-separated integers") from None


def _gen_context(kv: dict, d_default: int) -> RegularContext:
    field = BaseField.parse(kv.get("field", "QQ"))
    names = [v for v in kv.get("vars", ",".join(gen.VARIABLES[:d_default])).split(",") if v]
    if not names:
        raise InvalidParams("need at least one variable")
    return RegularContext.standard(names, field)


def cmd_gen(args) -> tuple[dict, int]:
    try:
        return _gen(args)
    except InvalidType as e:
        raise InvalidParams(str(e)) from None


def _gen(args) -> tuple[dict, int]:
    kv = _kv(args.params)
    known = {"r", "n", "vars", "field", "max_rank"}
    unknown = set(kv) - known
    if unknown:
        raise InvalidParams(f"unknown parameter(s): {', '.join(sorted(unknown))}")
    rng = random.Random(f"{args.seed}:gen:{args.kind}")
    sidecar = None
    if args.kind == "typical":
        if "r" not in kv:
            raise InvalidParams("typical needs r=")
        r = _ints(kv["r"], "r")
        ns = _ints(kv.get("n", ""), "n")
        if len(r) != 1:
            raise InvalidParams("r must be a single integer")
        ctx = _gen_context(kv, max(1, len(ns)))
        if not ns:
            ns = [0] * ctx.size
        if len(ns) != ctx.size:
            raise InvalidParams(f"n has {len(ns)} entries but there are {ctx.size} variables")
        t = TypicalType.of(r[0], ns, ctx.indices)
        cube = make_typical(ctx, t)
    elif args.kind in ("conjugated-simple", "koszul"):
        max_rank = int(kv.get("max_rank", 4))
        if not 0 <= max_rank <= 4:
            raise InvalidParams("max_rank must be between 0 and 4")
        ctx = _gen_context(kv, rng.randint(1, 3))
        if args.kind == "koszul":
            cube = gen.non_simple_koszul(ctx, rng, max_rank)
        else:
            if "r" in kv:
                r = _ints(kv["r"], "r")[0]
                ns = _ints(kv.get("n", ",".join("0" * ctx.size)), "n")
                t = TypicalType.of(r, ns, ctx.indices)
            else:
                t = gen.typical_type(rng, ctx.indices, max_rank)
            cube = gen.conjugated_simple(ctx, t, rng)
            sidecar = {"type": str(t), "r": t.r, "n": {str(s): v for s, v in t.n},
                       "seed": args.seed}
    else:
        raise InvalidParams(f"unknown kind {args.kind!r}")
    doc = document_from_cube(cube).to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(dumps_json(doc))
        if sidecar is not None:
            with open(args.out + ".type.json", "w", encoding="utf-8") as fh:
                fh.write(dumps_json(sidecar))
        return {"command": "gen", "kind": args.kind, "out": args.out,
                "sidecar": args.out + ".type.json" if sidecar else None, "ok": True}, EXIT_OK
    if sidecar is not None:
        sys.stderr.write(json.dumps({"sidecar": sidecar}) + "\n")
    return doc, EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "text"], default="json")
    common.add_argument("--seed", type=_seed, default=0)
    p = _Parser(prog="koszul", description="Koszul cube toolkit")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, fn, help_ in (("validate", cmd_validate, "check face laws and the Koszul property"),
                            ("normalize", cmd_normalize, "typical form with a verified isomorphism"),
                            ("tot", cmd_tot, "total complex and its homology")):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("file")
        sp.set_defaults(func=fn)
    sp = sub.add_parser("homology", parents=[common], help="H_0 along a direction or set")
    sp.add_argument("file")
    sp.add_argument("directions", help="a direction (1) or a set (1,2)")
    sp.set_defaults(func=cmd_homology)
    sp = sub.add_parser("verify", parents=[common], help="run a named property suite")
    sp.add_argument("suite", help=", ".join(sorted(SUITES)))
    sp.add_argument("--cases", type=int, default=None)
    sp.add_argument("--max-s", type=int, default=3)
    sp.add_argument("--max-rank", type=int, default=4)
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=cmd_verify)
    sp = sub.add_parser("gen", parents=[common], help="generate a cube document")
    sp.add_argument("kind", help="typical | conjugated-simple | koszul")
    sp.add_argument("params", nargs="*", help="key=value: r, n, vars, field, max_rank")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    fmt = getattr(args, "format", "json")
    try:
        report, code = args.func(args)
    except ParseError as e:
        _emit({"ok": False, "error": "ParseError", "message": str(e),
               "line": e.line, "column": e.column}, fmt, sys.stderr)
        return EXIT_PARSE
    except (UnknownSuite, InvalidParams) as e:
        _emit({"ok": False, "error": type(e).__name__, "message": str(e)}, fmt, sys.stderr)
        return EXIT_PARSE
    except MathError as e:
        _emit({"ok": False, "error": type(e).__name__, "message": str(e)}, fmt)
        return EXIT_MATH
    except KoszulError as e:
        _emit({"ok": False, "error": type(e).__name__, "message": str(e)}, fmt, sys.stderr)
        return EXIT_PARSE
    _emit(report, fmt)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
