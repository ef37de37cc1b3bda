"""Command-line entry point: ``vapproach check|convert|basechange|verify``.

Exit status: 0 when every verdict passes, 1 when some law fails (witnesses
are in the report), 2 for usage, parse and capability errors.
"""
from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .base_change import FAMILY_OF, Graph, b_phi, check_lax_algebra, reflect
from .convergence import (ConvergenceStructure, a_epsilon, check_beta_algebra,
                          check_probapp_convergence, r_functor)
from .io import (ParseError, builtin_map, dumps, load_any, load_map, load_structure,
                 quantale_from_obj, structure_to_obj)
from .lattice import adjoints, check_quantale, classify_hom, is_ccd
from .report import (BudgetExceeded, CapabilityError, LawReport, NotMonotoneError,
                     QuantaleStructureError)
from .spaces import (DistanceStructure, Tower, check_closure, check_probapp, check_tower,
                     from_tower, is_approach, subset_labels, to_tower)
from .suites import SUITE_NAMES, WorkbenchConfig, run_suite

SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


def _result(title, rep, info=None):
    return {"title": title, "ok": rep.ok, "info": info or {}, **rep.to_dict()}


def _single(title, ok, law, witness=None, info=None):
    rep = LawReport()
    if not ok:
        rep.fail(law, witness or {})
    rep.add(law)
    return _result(title, rep, info)


# -- check ---------------------------------------------------------------------------

def _check_quantale(q):
    rep = LawReport()
    for v in check_quantale(q):
        rep.fail(v.law, v.witness)
    rep.add("quantale laws")
    info = {"quantale": q.name, "size": q.size}
    if rep.ok:
        info.update(ccd=is_ccd(q), integral=q.is_integral)
    return [_result(f"quantale {q.name}", rep, info)]


def _check_space(s, mode):
    q = s.quantale
    if isinstance(s, Tower):
        rep = check_tower(s, mode or "closure")
        return [_result(f"tower axioms ({mode or 'closure'})", rep)]
    results = [_result("closure axioms (R'), (T')", check_closure(s))]
    appr, witness = is_approach(s)
    results[0]["info"]["approach"] = appr
    if witness and not appr:
        results[0]["info"]["approach_witness"] = witness
    if mode in ("approach_ll", "approach_coprime"):
        results.append(_result(f"tower axioms ({mode})", check_tower(to_tower(s), mode)))
    elif mode == "approach":
        results.append(_single("approach", appr, "approach", witness))
    if q.family == "delta_grid" and mode in (None, "probapp"):
        results.append(_result("probabilistic approach (PD1)-(PD4)", check_probapp(s)))
    return results


def _check_convergence(s):
    if s.quantale.family == "delta_grid":
        return [_result("probabilistic convergence", check_probapp_convergence(s))]
    return [_result("beta-algebra axioms (R''), (T'')", check_beta_algebra(s))]


def _check_map(m):
    mono = m.monotonicity_violations()
    rep = LawReport()
    for v in mono:
        rep.fail(v.law, v.witness)
    rep.add("map.monotone")
    info = {"map": m.name, "source": m.source.name, "target": m.target.name}
    if not mono:
        cls = classify_hom(m)
        left, right = adjoints(m)
        info.update(lax_hom=cls.is_lax_hom, hom=cls.is_hom,
                    preserves_joins=cls.preserves_joins, preserves_meets=cls.preserves_meets,
                    left_adjoint=left.to_labels() if left else None,
                    right_adjoint=right.to_labels() if right else None)
    return [_result(f"map {m.name}", rep, info)]


def cmd_check(args):
    if args.builtin:
        return _check_quantale(quantale_from_obj(args.builtin)), {}
    if not args.file:
        raise UsageError("check needs a FILE or --builtin NAME")
    kind, obj = load_any(args.file)
    if kind == "quantale":
        return _check_quantale(obj), {}
    if kind == "space":
        return _check_space(obj, args.mode), {}
    if kind == "convergence":
        return _check_convergence(obj), {}
    return _check_map(obj), {}


# -- convert -------------------------------------------------------------------------

def _diff(a, b):
    q, X = a.quantale, a.carrier
    return [[subset_labels(X, m), x, q.label(int(a.table[m, i])), q.label(int(b.table[m, i]))]
            for m in range(1 << len(X)) for i, x in enumerate(X) if a.table[m, i] != b.table[m, i]]


def cmd_convert(args):
    s = load_structure(args.file)
    target = args.to
    results, extra = [], {}
    notes = []
    if isinstance(s, Tower):
        rep = check_tower(s)
        results.append(_result("tower axioms (C0)-(C3)", rep))
        if not rep.ok:
            return results, extra
        d = from_tower(s, check=False)
        notes.append("towers satisfying (C0)-(C3) correspond to closure structures")
    elif isinstance(s, ConvergenceStructure):
        rep = check_beta_algebra(s)
        results.append(_result("beta-algebra axioms (R''), (T'')", rep))
        d = a_epsilon(s)
        notes.append("A_eps sends beta-algebras to approach structures")
    else:
        d = s
    if target == "distance":
        out = d
    elif target == "tower":
        out = to_tower(d)
        notes.append("c^v A = {x | v <= cA(x)}")
    else:
        if isinstance(s, ConvergenceStructure):
            out = s
        else:
            rep = check_closure(d)
            results.append(_result("closure axioms (R'), (T')", rep))
            if not rep.ok:
                return results, extra
            out = r_functor(d)
            notes.append("R is right adjoint to A_eps; it is inverse to A_eps on approach "
                         "structures")
            appr = is_approach(d)[0]
            back = a_epsilon(out)
            extra["round_trip"] = {"approach": appr, "lossless": back == d,
                                   "differences [A, x, input, round trip]": _diff(d, back)}
            if not appr:
                notes.append("input is not an approach structure: converting back gives a "
                             "strictly smaller structure")
    extra["notes"] = notes
    extra["output"] = structure_to_obj(out)
    return results, extra


# -- basechange ------------------------------------------------------------------------

def _resolve_map(spec, source, target):
    if spec in FAMILY_OF:
        return builtin_map(spec, source, target)
    path = Path(spec)
    if not path.exists():
        raise CapabilityError(f"unknown map {spec!r} (not a built-in name or a file)")
    return load_map(path)


def cmd_basechange(args):
    s = load_structure(args.file)
    if isinstance(s, Tower):
        s = from_tower(s)
    g = Graph.from_structure(s)
    target = quantale_from_obj(args.target) if args.target else None
    applied = []
    for spec in args.map:
        m = _resolve_map(spec, g.quantale, target)
        if m.source != g.quantale:
            raise CapabilityError(f"map {m.name} starts at {m.source.name}, structure lives "
                                  f"over {g.quantale.name}")
        g = b_phi(g, m)
        applied.append(m.name)
    if args.reflect:
        g = reflect(g)
    results = [_result(f"axioms over {g.quantale.name}", check_lax_algebra(g))]
    out = g.structure()
    info = {"maps": applied, "reflected": bool(args.reflect)}
    if isinstance(out, DistanceStructure):
        info["approach"] = is_approach(out)[0]
    results[0]["info"].update(info)
    return results, {"output": structure_to_obj(out)}


# -- verify --------------------------------------------------------------------------

def cmd_verify(args, cfg):
    if args.suite not in SUITE_NAMES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITE_NAMES)}")
    res = run_suite(args.suite, cfg, workers=args.workers)
    results = []
    for c in res.cases:
        entry = _result(c.title, c.report, c.info)
        if args.timing:
            entry["seconds"] = round(c.seconds, 3)
        results.append(entry)
    return results, {}


# -- plumbing ------------------------------------------------------------------------

def _parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=None)
    common.add_argument("--max-exhaustive-size", type=int, default=None)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--output", help="write the report (verify, check) or the converted "
                                         "structure (convert, basechange) to this file")
    common.add_argument("--timing", action="store_true", help="include wall-clock timings")

    p = argparse.ArgumentParser(prog="vapproach", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("check", parents=[common], help="check a quantale, space, convergence "
                                                       "or map file")
    c.add_argument("file", nargs="?")
    c.add_argument("--builtin", metavar="NAME[:params]", help="check a built-in quantale")
    c.add_argument("--quantale", dest="file_q", metavar="FILE", help="check a quantale file")
    c.add_argument("--mode", choices=("closure", "approach", "approach_ll", "approach_coprime",
                                      "probapp"))
    v = sub.add_parser("convert", parents=[common], help="change presentation of a structure")
    v.add_argument("file")
    v.add_argument("--to", required=True, choices=("distance", "tower", "convergence"))
    b = sub.add_parser("basechange", parents=[common], help="apply B_phi (and the reflector)")
    b.add_argument("file")
    b.add_argument("--map", action="append", required=True,
                   help="built-in map name or map file; repeat to compose")
    b.add_argument("--target", metavar="NAME[:params]",
                   help="codomain quantale for iota, sigma and tau")
    b.add_argument("--reflect", action="store_true")
    s = sub.add_parser("verify", parents=[common], help="run a named verification suite")
    s.add_argument("suite", help=", ".join(SUITE_NAMES))
    return p


def _echo(args):
    skip = {"output", "format", "timing"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


def _render_text(report):
    lines = [f"vapproach {report['command']['name']}: {report['status'].upper()}"]
    if "error" in report:
        lines.append(f"error: {report['error']}")
    for r in report.get("results", []):
        mark = "PASS" if r["ok"] else "FAIL"
        total = sum(r["checked"].values())
        sampled = [k for k, ex in r["exhaustive"].items() if not ex]
        tail = f" [{r['seconds']:.2f}s]" if "seconds" in r else ""
        lines.append(f"{mark} {r['title']} ({total} instances"
                     f"{', sampled: ' + ', '.join(sampled) if sampled else ''}){tail}")
        for law, n in r["violation_counts"].items():
            lines.append(f"    {law}: {n} violation(s)")
        for v in r["violations"][:5]:
            lines.append(f"      witness {v['law']}: {v['witness']}")
        for k, val in r["info"].items():
            lines.append(f"    {k}: {val}")
    for note in report.get("notes", []):
        lines.append(f"note: {note}")
    if "round_trip" in report:
        lines.append(f"round trip: {report['round_trip']}")
    if "output" in report and report.get("output_file") is None:
        lines.append(dumps(report["output"]).rstrip())
    if "output_file" in report:
        lines.append(f"wrote {report['output_file']}")
    return "\n".join(lines) + "\n"


def main(argv=None):
    parser = _parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    report = {"schema_version": SCHEMA_VERSION,
              "command": {"name": args.command, "args": _echo(args)}}
    code = 0
    try:
        cfg = WorkbenchConfig(max_exhaustive_size=args.max_exhaustive_size,
                              sample_count=args.samples, seed=args.seed,
                              output_format=args.format)
        if args.workers < 1:
            raise UsageError("--workers must be >= 1")
        if args.command == "check":
            if args.file_q and not args.file:
                args.file = args.file_q
            results, extra = cmd_check(args)
        elif args.command == "convert":
            results, extra = cmd_convert(args)
        elif args.command == "basechange":
            results, extra = cmd_basechange(args)
        else:
            results, extra = cmd_verify(args, cfg)
        report["results"] = results
        report.update({k: v for k, v in extra.items()})
        code = 0 if all(r["ok"] for r in results) else 1
    except (ParseError, CapabilityError, UsageError, BudgetExceeded, NotMonotoneError,
            QuantaleStructureError, ValueError) as exc:
        report["error"] = str(exc)
        code = 2
    report["status"] = {0: "pass", 1: "fail", 2: "error"}[code]
    report["exit_code"] = code
    if args.timing:
        report["timing"] = {"seconds": round(time.perf_counter() - started, 3)}
    if args.output and "output" in report and args.command in ("convert", "basechange"):
        Path(args.output).write_text(dumps(report["output"]), encoding="utf-8")
        report["output_file"] = args.output
        del report["output"]
    text = dumps(report) if args.format == "json" else _render_text(report)
    if args.output and args.command in ("check", "verify"):
        Path(args.output).write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
