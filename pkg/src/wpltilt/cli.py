"""Command-line front end.

Every command prints one JSON report ``{command, inputs, result, evidence,
timing_ms}``; ``--pretty`` prints the same content as indented text.  Exit
status: 0 success, 1 failed verdict, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Optional

from . import catalog, functors
from .catalog import CatalogError, family, primed_family
from .cycles import render_cycle
from .functors import INSERT, REDUCE, apply_sequence, crosscheck
from .homs import UnsupportedWeight, WindowInstability, hom_space, stable_hom
from .lattice import WeightType
from .parsing import ParseError, parse_bundles, parse_weight
from .suite import example_object, run_suite
from .tilting import (
    assemble_recollement,
    check_rigidity,
    endomorphism_quiver,
    quiver_dot,
    verify_cuboid_induction,
)


class UsageError(Exception):
    pass


def split_weight(argv: list[str]) -> tuple[list[str], Optional[str]]:
    """Pull a weight given as '@ (..)', '@(..)' or a trailing '(..)' out of the arguments."""
    out, wt = [], None
    i = 0
    while i < len(argv):
        a = argv[i]
        if a == "@" and i + 1 < len(argv):
            wt = argv[i + 1]
            i += 2
            continue
        if a.startswith("@(") or a.startswith("@ ("):
            wt = a[1:].strip()
            i += 1
            continue
        out.append(a)
        i += 1
    return out, wt


def _wt(args) -> Optional[WeightType]:
    return parse_weight(args.wt) if args.wt else None


def _bundles(text: str, args):
    return parse_bundles(text, _wt(args))


def _single(B):
    if len(B.distinct()) != 1:
        return None
    return B.distinct()[0]


# ---------------------------------------------------------------------------
# commands; each returns (result, evidence, ok)


def cmd_homdim(args):
    A, B = _bundles(args.source, args), _bundles(args.target, args)
    r = hom_space(A, B)
    return {"dimension": r.dimension}, r.as_dict(), True


def cmd_stabhom(args):
    A, B = _bundles(args.source, args), _bundles(args.target, args)
    r = stable_hom(A, B)
    return {"dimension": r.dimension, "coherent_dimension": r.coherent_dimension}, r.as_dict(), True


def _functor(args, direction):
    B = _bundles(args.expr, args)
    out = functors.apply_closed(B, args.j, direction)
    ev = {"source_weight": str(B.wt), "target_weight": str(out.wt)}
    ok = True
    if args.engine:
        checks = [crosscheck(b, args.j, direction).as_dict() for b in B.distinct()]
        ev["crosscheck"] = checks
        ok = all(c["agree"] for c in checks)
    if args.show_cycle:
        ev["cycle"] = render_cycle(functors.engine_apply(catalog.to_pcycle(B), args.j, direction))
    return {"object": str(out), "weight": str(out.wt)}, ev, ok


def cmd_reduce(args):
    return _functor(args, REDUCE)


def cmd_insert(args):
    return _functor(args, INSERT)


def _index_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise UsageError(f"bad index list {text!r}") from None


def cmd_apply_seq(args):
    B = _bundles(args.expr, args)
    J = _index_list(args.J)
    out = apply_sequence(B, J, args.dir, stable=args.stable)
    return {"object": str(out), "weight": str(out.wt)}, {"indices": J, "direction": args.dir}, True


def _family_or_expr(args):
    if args.family:
        wt = _wt(args)
        if wt is None:
            raise UsageError("--family needs a weight type")
        if args.family in ("thmB-T1k", "thmB-T2k"):
            return family(args.family, wt, args.q, args.k)
        if args.family == "thmB":
            i, j = args.k or 1, args.k2 or 1
            return family("thmB-T1k", wt, args.q, i) + family("thmB-T2k", wt, args.q, j)
        return family(args.family, wt)
    if not args.expr:
        raise UsageError("give a bundle expression or --family")
    return _bundles(args.expr, args)


def cmd_check_tilting(args):
    T = _family_or_expr(args)
    r = check_rigidity(T, args.window)
    d = r.as_dict()
    return {"verdict": r.verdict, "summands": r.summand_count, "expected": r.expected_count,
            "witness": r.witness}, d, r.passed


def cmd_assemble(args):
    if args.primed:
        wt = _wt(args)
        if wt is None:
            raise UsageError("--primed needs the big weight type")
        s, t = (_index_list(args.primed) + [1, 1])[:2]
        Tp, Ts = primed_family(1, wt, args.q, s), primed_family(2, wt, args.q, t)
    else:
        if not (args.tprime and args.tsecond):
            raise UsageError("give T' and T'' expressions, or --primed")
        Tp, Ts = parse_bundles(args.tprime), parse_bundles(args.tsecond)
    a = assemble_recollement(Tp, Ts, args.q, args.window)
    return ({"verdict": "pass" if a.passed else "fail", "object": str(a.object), "witness": a.witness},
            {"T'": str(Tp), "T''": str(Ts), "trace": a.trace}, a.passed)


def cmd_quiver(args):
    if args.example:
        T = example_object()
    else:
        T = _family_or_expr(args)
    if not args.skip_rigidity:
        r = check_rigidity(T, args.window)
        if r.witness is not None:
            return {"verdict": "fail", "reason": "object is not rigid", "witness": r.witness}, {}, False
    q = endomorphism_quiver(T)
    dot = quiver_dot(q)
    return {"vertices": q["vertices"], "arrows": q["arrows"]}, {"dot": dot, "multiplicity": q["multiplicity"]}, True


def cmd_verify_paper(args):
    weights = [parse_weight(w) for w in args.weights] if args.weights else None
    only = set(_index_list(args.only)) if args.only else None
    echo = (lambda s: print(s, file=sys.stderr)) if args.progress else None
    results = run_suite(weights, only, args.corrupt, echo=echo)
    failing = [r for r in results if r.passed is False]
    res = {"verdict": "fail" if failing else "pass",
           "first_failure": f"criterion {failing[0].number}: {failing[0].name}" if failing else None,
           "matrix": [{"criterion": r.number, "status": r.status, "seconds": round(r.seconds, 2)}
                      for r in results]}
    return res, {"criteria": [r.as_dict() for r in results]}, not failing


def cmd_cuboid(args):
    wt = _wt(args)
    if wt is None:
        raise UsageError("cuboid needs a weight type")
    r = verify_cuboid_induction(wt)
    return {"verdict": r["verdict"], "summands": r["summands"]}, r, r["verdict"] == "pass"


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wpltilt", description="Bundles on weighted projective lines via p-cycles.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--wt", help="weight type, e.g. '(2,3,4)'; also accepted as a trailing '@ (2,3,4)'")
    common.add_argument("--pretty", action="store_true", help="indented human-readable output")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("homdim", parents=[common], help="coherent Hom dimension")
    s.add_argument("source")
    s.add_argument("target")
    s.set_defaults(func=cmd_homdim)

    s = sub.add_parser("stabhom", parents=[common], help="Hom dimension in the stable category")
    s.add_argument("source")
    s.add_argument("target")
    s.set_defaults(func=cmd_stabhom)

    for name, fn in (("reduce", cmd_reduce), ("insert", cmd_insert)):
        s = sub.add_parser(name, parents=[common], help=f"apply the {name} functor with index j")
        s.add_argument("expr")
        s.add_argument("--j", type=int, required=True)
        s.add_argument("--engine", action="store_true", help="also run the chain-level cross-check")
        s.add_argument("--show-cycle", action="store_true", help="include the chain-level cycle table")
        s.set_defaults(func=fn)

    s = sub.add_parser("apply-seq", parents=[common], help="composite functor over an index sequence")
    s.add_argument("expr")
    s.add_argument("--J", required=True, help="comma-separated increasing indices")
    s.add_argument("--dir", choices=[REDUCE, INSERT], required=True)
    s.add_argument("--stable", action="store_true", help="drop line bundles after each step")
    s.set_defaults(func=cmd_apply_seq)

    fam = argparse.ArgumentParser(add_help=False)
    fam.add_argument("expr", nargs="?")
    fam.add_argument("--family", choices=list(catalog.FAMILIES) + ["thmB"])
    fam.add_argument("--q", type=int)
    fam.add_argument("--k", type=int, help="k for thmB-T1k/T2k, or i for thmB")
    fam.add_argument("--k2", type=int, help="j for thmB (T1i + T2j)")
    fam.add_argument("--window", type=int, default=None, help="shift window N (default WPL_RIGIDITY_WINDOW or 12)")

    s = sub.add_parser("check-tilting", parents=[common, fam], help="rigidity and summand count")
    s.set_defaults(func=cmd_check_tilting)

    s = sub.add_parser("assemble", parents=[common], help="glue T' and T'' along the ladder")
    s.add_argument("tprime", nargs="?")
    s.add_argument("tsecond", nargs="?")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--primed", help="use the primed families with k values 's,t' on the given weight type")
    s.add_argument("--window", type=int, default=None)
    s.set_defaults(func=cmd_assemble)

    s = sub.add_parser("quiver", parents=[common, fam], help="endomorphism quiver, with DOT output")
    s.add_argument("--example", action="store_true", help="the six-summand example on (2,3,4)")
    s.add_argument("--dot", action="store_true", help="print only the DOT graph")
    s.add_argument("--skip-rigidity", action="store_true")
    s.set_defaults(func=cmd_quiver)

    s = sub.add_parser("cuboid", parents=[common], help="replay the cuboid induction")
    s.set_defaults(func=cmd_cuboid)

    s = sub.add_parser("verify-paper", parents=[common], help="run the reproduction suite")
    s.add_argument("--weights", nargs="*", help="restrict to these weight types")
    s.add_argument("--only", help="comma-separated criterion numbers")
    s.add_argument("--corrupt", help=argparse.SUPPRESS)
    s.add_argument("--progress", action="store_true", help="print one line per criterion to stderr")
    s.set_defaults(func=cmd_verify_paper)
    return p


def _pretty(report: dict) -> str:
    lines = [f"{report['command']}  ({report['timing_ms']} ms)"]
    for key in ("inputs", "result"):
        lines.append(f"{key}:")
        for k, v in report[key].items():
            lines.append(f"  {k}: {v}")
    ev = report.get("evidence") or {}
    if ev:
        lines.append("evidence:")
        lines.append("  " + json.dumps(ev, indent=2, default=str).replace("\n", "\n  "))
    return "\n".join(lines)


def main(argv: Optional[list[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    argv, wt_text = split_weight(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if wt_text:
        if args.wt and args.wt.replace(" ", "") != wt_text.replace(" ", ""):
            print(json.dumps({"error": "conflicting weight types"}), file=sys.stderr)
            return 2
        args.wt = wt_text
    inputs = {k: v for k, v in vars(args).items() if k not in ("func", "pretty", "command") and v not in (None, False)}
    t = time.perf_counter()
    try:
        result, evidence, ok = args.func(args)
    except (ParseError, CatalogError, UnsupportedWeight, UsageError, ValueError) as exc:
        print(json.dumps({"command": args.command, "error": str(exc)}), file=sys.stderr)
        return 2
    except WindowInstability as exc:
        print(json.dumps({"command": args.command, "error": str(exc)}), file=sys.stderr)
        return 1
    report = {"command": args.command, "inputs": inputs, "result": result, "evidence": evidence,
              "timing_ms": round((time.perf_counter() - t) * 1000, 1)}
    if getattr(args, "dot", False) and ok:
        print(evidence["dot"])
    elif args.pretty:
        print(_pretty(report))
    else:
        print(json.dumps(report, default=str))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
