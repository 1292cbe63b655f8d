"""Command-line interface.

Subcommands:

* ``catalog list`` / ``catalog verify`` - enumerate or machine-check the
  curve families over a parameter grid;
* ``convert`` - interconvert cusp encodings;
* ``run FILE`` - execute a construction script;
* ``analyze`` - resolve a curve or a parametrization at a point;
* ``scripts verify`` - replay the whole shipped construction corpus.

Exit codes: 0 success, 1 verification or assertion failure, 2 input error.
The environment variable CUSPFORGE_PRECISION overrides the default series
precision.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from cuspforge import catalog as cat
from cuspforge import corpus as corp
from cuspforge import script as scr
from cuspforge.invariants import (
    CuspType,
    EncodingError,
    char_to_multseq,
    char_to_newton,
    cusp_type_json,
    format_char_exponents,
    format_multseq,
    format_newton_pairs,
    multseq_delta,
    parse_char_exponents,
    parse_multseq,
    parse_newton_pairs,
)
from cuspforge.polynomials import PolynomialError, dehomogenize, parse_polynomial
from cuspforge.series import (
    IrrationalCoefficient,
    PrecisionExhausted,
    ProjectiveParametrization,
    char_from_branch,
    default_precision,
    localize_parametrization,
    multseq_from_branch,
    newton_puiseux_rational,
    with_precision_retry,
)

OK, FAIL, BAD_INPUT = 0, 1, 2


def _parse_projective_point(text: str) -> tuple:
    s = text.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise ValueError(f"point must look like [a:b:c], got {text!r}")
    parts = s[1:-1].split(":")
    from fractions import Fraction

    return tuple(Fraction(p.strip()) for p in parts)


def _cmd_catalog(args) -> int:
    families = [args.family] if args.family else None
    grid = list(
        cat.default_grid(args.umax, args.lmax, args.mmax, args.kmax, families=families)
    )
    if args.action == "list":
        rows = [cat.instance_json(cat.instantiate(p)) for p in grid]
        if args.json:
            print(json.dumps(rows, indent=2, sort_keys=True))
        else:
            for row in rows:
                cusps = " and ".join(
                    "[" + ",".join(str(m) for m in c["multseq"]) + "]" for c in row["cusps"]
                )
                params = " ".join(f"{k}={v}" for k, v in sorted(row["params"].items()))
                print(f"{row['family']:3} {params:18} degree {row['degree']:4}  cusps {cusps}")
        return OK
    # verify
    results = []
    failures = 0
    for p in grid:
        report = cat.verify_instance(cat.instantiate(p))
        ok = report.ok
        failures += not ok
        results.append(
            {
                "instance": cat.instance_json(report.instance),
                "ok": ok,
                "genus": {"ok": report.genus.ok, "lhs": report.genus.lhs, "rhs": report.genus.rhs},
                "encodings_match": list(report.encodings_match),
                "cbar_squared": report.cbar,
            }
        )
    if args.json:
        print(json.dumps({"results": results, "failures": failures}, indent=2, sort_keys=True))
    else:
        for r in results:
            params = " ".join(f"{k}={v}" for k, v in sorted(r["instance"]["params"].items()))
            mark = "ok " if r["ok"] else "FAIL"
            print(
                f"{mark} {r['instance']['family']:3} {params:18} degree {r['instance']['degree']:4} "
                f"genus {r['genus']['lhs']}={r['genus']['rhs']} cbar {r['cbar_squared']}"
            )
        print(f"{len(results) - failures}/{len(results)} instances verified")
    return OK if failures == 0 else FAIL


def _cmd_convert(args) -> int:
    payload: dict = {}
    if args.newton:
        np_ = parse_newton_pairs(args.newton)
        ct = CuspType.from_newton(np_)
        payload = cusp_type_json(ct)
        payload["degenerate"] = np_.degenerate
        human = [
            f"newton  {format_newton_pairs(ct.newton)}" + ("  (degenerate)" if np_.degenerate else ""),
            f"char    {format_char_exponents(ct.char)}",
            f"multseq {format_multseq(ct.multseq)}",
            f"delta   {ct.delta}",
        ]
    elif args.char:
        ce = parse_char_exponents(args.char)
        ms = char_to_multseq(ce)
        payload = {
            "char": {"a": ce.a, "b": list(ce.b)},
            "multseq": list(ms.entries),
            "delta": multseq_delta(ms),
        }
        human = [f"char    {format_char_exponents(ce)}"]
        if ce.b:
            np_ = char_to_newton(ce)
            payload["newton"] = [[p, q] for p, q in np_.pairs]
            human.append(f"newton  {format_newton_pairs(np_)}")
        human += [f"multseq {format_multseq(ms)}", f"delta   {payload['delta']}"]
    else:
        ms = parse_multseq(args.multseq)
        payload = {"multseq": list(ms.entries), "delta": multseq_delta(ms)}
        human = [
            f"multseq {format_multseq(ms)}",
            f"delta   {payload['delta']}",
            "(characteristic exponents are not derivable from a multiplicity sequence here)",
        ]
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print("\n".join(human))
    return OK


def _branch_report(branch) -> dict:
    ms = multseq_from_branch(branch)
    payload = {"multseq": list(ms.entries), "delta": multseq_delta(ms)}
    if ms.entries:
        ce = char_from_branch(branch)
        payload["char"] = {"a": ce.a, "b": list(ce.b)}
        payload["newton"] = [[p, q] for p, q in char_to_newton(ce).pairs]
    return payload


def _cmd_analyze(args) -> int:
    prec = args.precision
    if args.poly:
        f3 = parse_polynomial(args.poly, ("x", "y", "z"))
        point = _parse_projective_point(args.point)
        local, chart = dehomogenize(f3, point)
        chart = dict(chart, center=[str(v) for v in chart["center"]])

        def compute(n):
            branches = newton_puiseux_rational(local, n)
            return [_branch_report(b) for b in branches]

        base = prec or default_precision(max(sum(t) for t in f3))
        reports = with_precision_retry(compute, base)
        payload = {"point": [str(v) for v in point], "chart": chart, "branches": reports}
    else:
        coords = [p.strip() for p in args.param.split(";")]
        if len(coords) != 3:
            raise ValueError("--param expects three polynomials in t,s separated by ';'")
        par = ProjectiveParametrization(
            *(parse_polynomial(c, ("t", "s")) for c in coords)
        )
        at = _parse_projective_point(args.at)
        if len(at) != 2:
            raise ValueError("--at expects a parameter point [t0:s0]")

        def compute(n):
            branch, image, chart = localize_parametrization(par, at, n)
            rep = _branch_report(branch)
            rep["image"] = [str(v) for v in image]
            rep["chart"] = chart
            return rep

        base = prec or default_precision(par.degree)
        payload = {"at": [str(v) for v in at], "branch": with_precision_retry(compute, base)}
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(json.dumps(payload, indent=2, sort_keys=True))
    return OK


def _cmd_run(args) -> int:
    text = Path(args.file).read_text()
    script = scr.parse(text)
    report = scr.execute(script, dot_dir=args.dot_dir)
    if args.trace:
        print(report.text, end="")
    else:
        print(report.lines[-1])
    return OK if report.ok else FAIL


def _cmd_scripts_verify(args) -> int:
    corpus = corp.standard_corpus()
    failures = 0
    for name, text in sorted(corpus.items()):
        report = scr.execute(scr.parse(text))
        failures += not report.ok
        print(f"{'PASS' if report.ok else 'FAIL'} {name}")
    print(f"{len(corpus) - failures}/{len(corpus)} scripts replayed")
    return OK if failures == 0 else FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cuspforge",
        description="Exact invariants of plane curve cusps and Cremona construction replays.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p_cat = sub.add_parser("catalog", help="list or verify the curve families")
    p_cat.add_argument("action", choices=["list", "verify"])
    p_cat.add_argument("--family", choices=list(cat.FAMILY_IDS))
    p_cat.add_argument("--umax", type=int, default=6)
    p_cat.add_argument("--lmax", type=int, default=6)
    p_cat.add_argument("--mmax", type=int, default=6)
    p_cat.add_argument("--kmax", type=int, default=12)
    p_cat.add_argument("--json", action="store_true")
    p_cat.set_defaults(func=_cmd_catalog)

    p_conv = sub.add_parser("convert", help="interconvert cusp encodings")
    group = p_conv.add_mutually_exclusive_group(required=True)
    group.add_argument("--newton", help="Newton pairs, e.g. '(2,5)(3,1)'")
    group.add_argument("--char", help="characteristic exponents, e.g. '(6;15,16)'")
    group.add_argument("--multseq", help="multiplicity sequence, e.g. '[6,6,3,3]' or '[4_2,2_3]'")
    p_conv.add_argument("--json", action="store_true")
    p_conv.set_defaults(func=_cmd_convert)

    p_run = sub.add_parser("run", help="execute a construction script")
    p_run.add_argument("file")
    p_run.add_argument("--trace", action="store_true", help="print the per-statement report")
    p_run.add_argument("--dot-dir", help="write a DOT snapshot after every statement")
    p_run.set_defaults(func=_cmd_run)

    p_an = sub.add_parser("analyze", help="local branch analysis")
    group = p_an.add_mutually_exclusive_group(required=True)
    group.add_argument("--poly", help="projective curve equation in x,y,z")
    group.add_argument("--param", help="three parametrization polynomials in t,s, ';'-separated")
    p_an.add_argument("--point", help="projective point [a:b:c] (with --poly)")
    p_an.add_argument("--at", help="parameter point [t0:s0] (with --param)")
    p_an.add_argument("--precision", type=int)
    p_an.add_argument("--json", action="store_true")
    p_an.set_defaults(func=_cmd_analyze)

    p_scr = sub.add_parser("scripts", help="operate on the shipped script corpus")
    p_scr.add_argument("action", choices=["verify"])
    p_scr.set_defaults(func=_cmd_scripts_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.command == "analyze":
            if args.poly and not args.point:
                ap.error("--poly requires --point")
            if args.param and not args.at:
                ap.error("--param requires --at")
        return args.func(args)
    except (EncodingError, PolynomialError, scr.ScriptError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except (PrecisionExhausted, IrrationalCoefficient) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
