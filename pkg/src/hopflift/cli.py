"""Command-line front end: ``hopflift verify|gb|solve|list|show``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import catalog
from .bosonization import RealizationError
from .report import hilbert_figure, render_text, solution_json, to_json_text

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


class UsageError(ValueError):
    pass


# --------------------------------------------------------------------------
# case resolution


def _entry(ref: str) -> catalog.CatalogEntry:
    """Catalog id or path to a case file."""
    p = Path(ref)
    if p.suffix == ".json" or p.exists():
        if not p.exists():
            raise UsageError(f"no such file: {ref}")
        return catalog.load_file(p)
    try:
        return catalog.entry(ref)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from exc


def _cases(entry: catalog.CatalogEntry, tag: str | None):
    if tag is None:
        return list(entry.cases)
    try:
        return [entry.case(tag)]
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from exc


def _parse_lambdas(items: list[str] | None) -> dict[str, Fraction]:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--lambda expects name=value, got {item!r}")
        k, v = item.split("=", 1)
        try:
            out[k.strip()] = Fraction(v.strip())
        except ValueError as exc:
            raise UsageError(f"bad lambda value {v!r}") from exc
    return out


def _values_for(case, overrides: dict) -> list[dict] | None:
    """One specialization from --lambda overrides (unset lambdas are 1)."""
    if not overrides:
        return None
    names = [n for n, _ in case.active_lambdas]
    unknown = set(overrides) - set(names)
    if unknown:
        raise UsageError(f"{case.id} [{case.tag}]: unknown or inactive lambda(s) {', '.join(sorted(unknown))}")
    return [{k: overrides.get(k, Fraction(1)) for k in names}]


def _strip_timings(obj):
    if isinstance(obj, dict):
        return {k: _strip_timings(v) for k, v in obj.items() if k not in ("timing_seconds", "seconds")}
    if isinstance(obj, list):
        return [_strip_timings(v) for v in obj]
    return obj


def _trace(verbose: int):
    if not verbose:
        return None
    return lambda msg: print(msg, file=sys.stderr, flush=True)


def _config(args, **extra) -> dict:
    from .ncgb import default_cap

    cfg = {"command": args.command, "degree_cap": default_cap()}
    cfg.update(extra)
    return cfg


# --------------------------------------------------------------------------
# verify


def _verify_job(job: tuple) -> dict:
    ref, tag, seeds, seed, overrides, verbose = job
    from .lifting import run_case

    try:
        entry = _entry(ref)
        case = entry.case(tag)
        rep = run_case(case, seeds=seeds, seed=seed, trace=_trace(verbose), values=_values_for(case, overrides))
        if entry.expected.get("admissibility"):
            rows = catalog.check_admissibility(entry)
            rep["admissibility"]["expected"] = rows
            rep["checks"]["admissibility"] = all(r["match"] for r in rows)
            rep["passed"] = all(rep["checks"].values())
    except RealizationError as exc:
        return {"schema": 1, "case": ref, "realization_tag": tag, "passed": False,
                "error": {"kind": "realization", "message": str(exc)}}
    except UsageError as exc:
        return {"schema": 1, "case": ref, "realization_tag": tag, "passed": False,
                "error": {"kind": "usage", "message": str(exc)}}
    # round trip so that the report is plain JSON data
    return json.loads(to_json_text(rep))


def _failures(rep: dict) -> list[dict]:
    where = {"case": rep.get("case"), "realization": rep.get("realization_tag")}
    if "error" in rep:
        return [dict(where, check="error", detail=rep["error"]["message"])]
    out = []
    for name, ok in rep.get("checks", {}).items():
        if not ok:
            out.append(dict(where, check=name))
    for g in rep.get("golden", []):
        if not g["match"]:
            out.append(dict(where, check="golden", relation=g["relation"], side=g["side"], kind=g["kind"]))
    return out


def _jobs_for(args) -> list[tuple]:
    refs = list(args.cases)
    if args.all:
        refs = catalog.ids() + [r for r in refs if r not in catalog.ids()]
    if not refs:
        raise UsageError("verify needs a case id, a case file or --all")
    overrides = _parse_lambdas(args.set_lambda)
    jobs = []
    for ref in refs:
        try:
            entry = _entry(ref)
        except RealizationError as exc:
            jobs.append(("error", ref, str(exc)))
            continue
        for case in _cases(entry, args.tag):
            _values_for(case, overrides)  # validate early
            jobs.append((ref, case.tag, args.seeds, args.seed, overrides, args.verbose))
    return jobs


def cmd_verify(args) -> int:
    jobs = _jobs_for(args)
    runnable = [j for j in jobs if j[0] != "error"]
    if args.jobs > 1 and len(runnable) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            done = list(ex.map(_verify_job, runnable))
    else:
        done = [_verify_job(j) for j in runnable]
    it = iter(done)
    reports = []
    for j in jobs:
        if j[0] == "error":
            reports.append({"schema": 1, "case": j[1], "realization_tag": None, "passed": False,
                            "error": {"kind": "realization", "message": j[2]}})
        else:
            reports.append(next(it))
    if not args.timings:
        reports = [_strip_timings(r) for r in reports]
    if args.figures:
        _verify_figures(reports, args.figures)
    failures = [f for r in reports for f in _failures(r)]
    passed = not failures
    if args.format == "json":
        out = {"schema": 1, "config": _config(args, seed=args.seed, seeds=args.seeds,
                                               lambda_overrides={k: str(v) for k, v in
                                                                 _parse_lambdas(args.set_lambda).items()}),
               "reports": reports, "failures": failures, "passed": passed}
        print(to_json_text(out))
    else:
        for r in reports:
            if "error" in r:
                print(f"case {r['case']}: error: {r['error']['message']}")
            else:
                print(render_text(r))
        print(f"seed {args.seed}, {args.seeds} specializations")
        if failures:
            print("failures:")
            for f in failures:
                print("  " + ", ".join(f"{k}={v}" for k, v in f.items()))
        print("PASS" if passed else "FAIL")
    return EXIT_OK if passed else EXIT_FAIL


def _verify_figures(reports: list[dict], folder: str) -> None:
    os.makedirs(folder, exist_ok=True)
    for r in reports:
        if "nichols" not in r:
            continue
        series = {"Nichols": r["nichols"]["hilbert"]}
        for k, sp in enumerate(r.get("specializations", [])):
            h = sp["lifting"].get("hilbert")
            if h and h != series["Nichols"]:
                series[f"lifting #{k + 1}"] = h
        spec0 = (r.get("specializations") or [{}])[0]
        if spec0.get("lifting", {}).get("hilbert") and len(series) == 1:
            series["lifting (all specializations)"] = spec0["lifting"]["hilbert"]
        tag = r.get("realization_tag") or "default"
        path = Path(folder) / f"{r['case']}-{tag}.png"
        hilbert_figure(series, str(path), title=f"{r['case']} [{tag}] Hilbert series")
        r["figure"] = str(path)


# --------------------------------------------------------------------------
# gb


def cmd_gb(args) -> int:
    from .freealg import CycField
    from .lifting import LiftingSolver, specialize
    from .ncgb import buchberger

    entry = _entry(args.case)
    case = _cases(entry, args.tag)[0]
    R = case.realization
    if args.side == "nichols":
        ring = CycField(R.n)
        gens = [r.expr for r in case.relations]
        vals = {}
    else:
        overrides = _parse_lambdas(args.set_lambda)
        vals = (_values_for(case, overrides) or [{k: Fraction(1) for k, _ in case.active_lambdas}])[0]
        solver = LiftingSolver(case, trace=_trace(args.verbose))
        sol = solver.run()
        ring = CycField(R.n) if args.side == "cleft" else R.ring()
        gens = []
        for r in case.relations:
            s = sol.relations[r.rid]
            gens.append(specialize(s.cleft_relation if args.side == "cleft" else s.lifting_relation, vals, ring))
    G = buchberger(gens, bound=args.bound, ring=ring, theta=R.theta, braiding=R.braiding,
                   trace=_trace(args.verbose))
    rep = {
        "schema": 1,
        "kind": "gb",
        "case": case.id,
        "realization_tag": case.tag,
        "side": args.side,
        "lambda": {k: str(v) for k, v in vals.items()},
        "config": _config(args, bound=args.bound),
        "complete": G.complete,
        "degree_bound": G.degree_bound,
        "basis": [str(p) for p in G.basis()],
        "leading_words": sorted(G.leading_words(), key=lambda w: (len(w), w)),
        "hilbert": G.hilbert() if G.complete else None,
        "dimension": G.dimension(),
    }
    if not G.complete:
        rep["error"] = f"incomplete at bound {G.degree_bound}"
    if args.figure and G.complete:
        rep["figure"] = hilbert_figure({args.side: G.hilbert()}, args.figure,
                                       title=f"{case.id} [{case.tag}] {args.side}")
    if args.format == "json":
        print(to_json_text(rep))
    else:
        from .freealg import format_word

        rep = dict(rep, leading_words=[format_word(w) for w in rep["leading_words"]])
        print(render_text(rep))
        for p in rep["basis"]:
            print(f"  {p}")
    if not G.complete:
        print(f"incomplete at bound {G.degree_bound}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


# --------------------------------------------------------------------------
# solve, list, show


def cmd_solve(args) -> int:
    from .lifting import LiftingSolver

    entry = _entry(args.case)
    case = _cases(entry, args.tag)[0]
    solver = LiftingSolver(case, trace=_trace(args.verbose))
    if args.stratum is None:
        solver.run()
        keep = {r.rid for r in case.relations}
    else:
        if not 0 <= args.stratum < len(case.strata):
            raise UsageError(f"{case.id} has strata 0..{len(case.strata) - 1}")
        solver.solve_stratum(args.stratum)
        keep = {r.rid for r in case.strata[args.stratum].relations}
    rels = [x for x in _solution_rows(case, solver) if x["relation"] in keep]
    out = {"schema": 1, "case": case.id, "realization_tag": case.tag, "stratum": args.stratum,
           "config": _config(args), "relations": rels}
    if not args.timings:
        out = _strip_timings(out)
    if args.format == "json":
        print(to_json_text(out))
    else:
        for x in rels:
            print(f"[{x['stratum']}] {x['relation']}  lambda={x['lambda']}")
            print(f"  cleft correction:   {x['cleft_correction']}")
            print(f"  lifting correction: {x['lifting_correction']}")
            print(f"  lifting relation:   {x['lifting_relation']} = 0")
    return EXIT_OK


def _solution_rows(case, solver) -> list[dict]:
    from types import SimpleNamespace

    done = [r for r in case.relations if r.rid in solver.solution.relations]
    return solution_json(SimpleNamespace(relations=done), solver.solution)


def cmd_list(args) -> int:
    rows = []
    for e in catalog.load_all():
        rows.append({"id": e.id, "title": e.title, "realizations": [c.tag for c in e.cases]})
    if args.format == "json":
        print(to_json_text({"schema": 1, "cases": rows}))
    else:
        for r in rows:
            print(f"{r['id']:<12} {r['title']:<28} realizations: {', '.join(r['realizations'])}")
    return EXIT_OK


def cmd_show(args) -> int:
    from .cyclotomic import format_cyc
    from .lifting import admissibility

    entry = _entry(args.case)
    if args.format == "json":
        print(to_json_text(dict(entry.data, schema=1)))
        return EXIT_OK
    print(f"{entry.id}: {entry.title}")
    if entry.notes:
        print(f"  {entry.notes}")
    case0 = entry.cases[0]
    for i, st in enumerate(case0.strata):
        for r in st.relations:
            print(f"  stratum {i}: {r.rid:<10} {r.text:<24} degree {r.md}  lambda {case0.lambda_slots.get(r.rid)}")
    for c in entry.cases:
        q = "; ".join(", ".join(format_cyc(x) for x in row) for row in c.braiding.matrix())
        adm = admissibility(c)
        print(f"  realization {c.tag}: q = ({q})  active: {', '.join(adm['active']) or '-'}")
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hopflift", description="Liftings of Nichols algebras of diagonal type.")
    p.add_argument("-v", "--verbose", action="count", default=0, help="trace progress on stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt="text"):
        sp.add_argument("--format", choices=["json", "text"], default=fmt)
        sp.add_argument("--tag", help="realization tag (default: all for verify, first otherwise)")
        sp.add_argument("-v", "--verbose", action="count", default=0)

    v = sub.add_parser("verify", help="run the full pipeline on catalog cases or case files")
    v.add_argument("cases", nargs="*", help="catalog ids or case-file paths")
    v.add_argument("--all", action="store_true", help="every catalog case")
    v.add_argument("--jobs", type=int, default=1, help="parallel workers across cases")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--seeds", type=int, default=5, help="number of lambda specializations")
    v.add_argument("--lambda", dest="set_lambda", action="append", metavar="NAME=VALUE",
                   help="check a single specialization (unset lambdas are 1)")
    v.add_argument("--figures", metavar="DIR", help="write Hilbert-series plots to DIR")
    v.add_argument("--timings", action="store_true", help="keep wall-clock timings in the report")
    common(v)
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("gb", help="Groebner basis, Hilbert series and dimension")
    g.add_argument("case")
    g.add_argument("--side", choices=["nichols", "cleft", "lifting"], default="nichols")
    g.add_argument("--bound", type=int, help="fixed degree bound (default: raise until complete)")
    g.add_argument("--lambda", dest="set_lambda", action="append", metavar="NAME=VALUE")
    g.add_argument("--figure", metavar="PATH", help="write a Hilbert-series plot")
    common(g)
    g.set_defaults(func=cmd_gb)

    s = sub.add_parser("solve", help="cleft and lifting corrections as JSON")
    s.add_argument("case")
    s.add_argument("--stratum", type=int)
    s.add_argument("--timings", action="store_true")
    common(s, fmt="json")
    s.set_defaults(func=cmd_solve)

    ls = sub.add_parser("list", help="catalog cases")
    ls.add_argument("--format", choices=["json", "text"], default="text")
    ls.set_defaults(func=cmd_list)

    sh = sub.add_parser("show", help="relations and realizations of a case")
    sh.add_argument("case")
    sh.add_argument("--format", choices=["json", "text"], default="text")
    sh.set_defaults(func=cmd_show)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    args.verbose = getattr(args, "verbose", 0)
    try:
        return args.func(args)
    except RealizationError as exc:
        _error(args, "realization", str(exc))
    except (UsageError, catalog.CaseFileError) as exc:
        _error(args, "usage", str(exc))
    return EXIT_ERROR


def _error(args, kind: str, message: str) -> None:
    if getattr(args, "format", "text") == "json":
        print(to_json_text({"schema": 1, "passed": False, "failures": [{"check": "error", "kind": kind,
                                                                         "detail": message}]}))
    else:
        print(f"error: {message}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
