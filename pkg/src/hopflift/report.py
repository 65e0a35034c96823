"""JSON reports, golden comparison, text rendering and Hilbert-series plots."""

from __future__ import annotations

import json

from .expr import Expr, parse

__all__ = [
    "compare_expected",
    "hilbert_figure",
    "render_text",
    "solution_json",
    "to_json_text",
]


def _poly_text(p) -> str:
    return "0" if p.is_zero() else str(p)


def solution_json(case, solution) -> list[dict]:
    out = []
    for r in case.relations:
        s = solution.relations[r.rid]
        out.append({
            "relation": r.rid,
            "text": r.text,
            "stratum": r.stratum,
            "degree": list(r.md),
            "lambda": s.lam,
            "g_r": list(s.g_r),
            "primitive": s.primitive,
            "cleft_correction": _poly_text(s.cleft_correction),
            "cleft_relation": str(s.cleft_relation),
            "lifting_correction": _poly_text(s.lifting_correction),
            "lifting_relation": str(s.lifting_relation),
            "route_agreement": s.route_agree,
            "stats": s.stats,
        })
    return out


def compare_expected(case, solver) -> list[dict]:
    """Compare the computed relations with the case's expected relations.

    An expected entry {"lhs", "rhs"} matches exactly when lhs - rhs minus
    the computed relation lies in the ideal of the earlier strata (the cleft
    ideal for cleft entries, the lifting ideal for lifting entries).

    Otherwise it matches up to reparametrization when the difference is
    c (cleft side) or c (1 - g_r) (lifting side) for a polynomial c in the
    earlier lambdas: that is the substitution lambda_r -> lambda_r - c, and
    both sides of one relation must then need the same c.
    """
    from .freealg import NCPoly
    from .lifting import _leg_nf

    exp = case.expected or {}
    scope = case.scope()
    R = case.realization
    ring = solver.ring
    out = []
    shifts: dict = {}
    for side in ("cleft", "lifting"):
        for rid, entry in (exp.get(side) or {}).items():
            r = case.relation(rid)
            sol = solver.solution.relations[rid]
            golden = parse(f"({entry['lhs']}) - ({entry['rhs']})", scope)
            ours = sol.cleft_relation if side == "cleft" else sol.lifting_relation
            G = solver._gb(side, r.stratum, r.degree)
            diff = _leg_nf(Expr("add", (golden, Expr("neg", (ours,)))), G, ring, R)
            rec = {"side": side, "relation": rid, "expected": f"{entry['lhs']} = {entry['rhs']}"}
            if not diff:
                rec["match"], rec["kind"] = True, "exact"
            else:
                rec["difference"] = str(NCPoly(diff, ring, R.theta))
                c = _shift(diff, ring, sol.g_r if side == "lifting" else None)
                if c is not None and sol.lam is not None:
                    # c may only involve lambdas of earlier strata
                    earlier = {case.lambda_slots[x.rid] for x in case.relations if x.stratum < r.stratum}
                    allowed = [name in earlier for name in ring.lam_names]
                    if any(e and not ok for (lam, _g) in c.d for e, ok in zip(lam, allowed)):
                        c = None
                if c is None or sol.lam is None:
                    rec["match"], rec["kind"] = False, "mismatch"
                else:
                    rec["match"], rec["kind"] = True, "reparametrized"
                    rec["shift"] = f"{sol.lam} -> {sol.lam} - ({c})"
                    shifts.setdefault(rid, []).append((c, rec))
            out.append(rec)
    for rid, lst in shifts.items():
        sides = {rec["side"] for _c, rec in lst}
        cs = {str(c) for c, _rec in lst}
        # a shift on one side must be matched by the other side when both are given
        both = all(rid in (exp.get(s) or {}) for s in ("cleft", "lifting"))
        if len(cs) > 1 or (both and len(sides) < 2):
            for _c, rec in lst:
                rec["match"], rec["kind"] = False, "inconsistent shift"
    return out


def _shift(diff: dict, ring, g_r):
    """c with diff = c (g_r None) or diff = c (1 - g_r); c lambda-only."""
    if set(diff) != {""}:
        return None
    coef = diff[""]
    zero = ring.e_gam
    c = {lam: v for (lam, gam), v in coef.d.items() if gam == zero}
    rest = {(lam, gam): v for (lam, gam), v in coef.d.items() if gam != zero}
    if g_r is None:
        if rest:
            return None
    else:
        g = ring.reduce_gamma(g_r)
        if g == zero or set(rest) != {(lam, g) for lam in c}:
            return None
        if any(not (rest[(lam, g)] + v).is_zero() for lam, v in c.items()):
            return None
    from .freealg import Coef

    return Coef(ring, {(lam, zero): v for lam, v in c.items()})


def to_json_text(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, default=str)


def render_text(report: dict) -> str:
    """Human-readable summary derived from a JSON report."""
    lines = []
    kind = report.get("kind", "verify")
    if kind == "gb":
        lines.append(f"case {report['case']} [{report.get('realization_tag', '')}] {report['side']} ideal")
        lines.append(f"  complete: {report['complete']}  dimension: {report['dimension']}")
        lines.append(f"  Hilbert series: {report['hilbert']}")
        lines.append("  leading words: " + ", ".join(report["leading_words"]))
        return "\n".join(lines)
    lines.append(f"case {report['case']} [{report.get('realization_tag', '')}]")
    adm = report.get("admissibility", {})
    for row in adm.get("relations", []):
        lines.append(f"  {row['relation']:<12} deg {tuple(row['degree'])}  {row['status']:<12} {row['reason']}")
    scan = adm.get("scan")
    if scan:
        for k, v in scan.get("pairs", {}).items():
            lines.append(f"  pair {k}: q12 in {{{', '.join(v)}}}" if v else f"  pair {k}: never admissible")
    for rel in report.get("relations", []):
        lines.append(f"  [{rel['stratum']}] {rel['relation']}: cleft   {rel['cleft_relation']} = 0")
        lines.append(f"  [{rel['stratum']}] {rel['relation']}: lifting {rel['lifting_relation']} = 0")
    for g in report.get("golden", []):
        verdict = g["kind"] + (f" ({g['shift']})" if "shift" in g else "")
        lines.append(f"  golden {g['side']} {g['relation']}: {verdict}")
    for sp in report.get("specializations", []):
        lam = ", ".join(f"{k}={v}" for k, v in sp["lambda"].items()) or "-"
        c, li = sp["cleft"], sp["lifting"]
        lines.append(f"  lambda {lam}: cleft flat={c['flat']} lifting flat={li['flat']} "
                     f"dim={li.get('dimension')} hopf={sp['hopf_ideal']}")
    for k, v in report.get("checks", {}).items():
        lines.append(f"  check {k}: {'pass' if v else 'FAIL'}")
    if "passed" in report:
        lines.append(f"  result: {'PASS' if report['passed'] else 'FAIL'}")
    return "\n".join(lines)


def hilbert_figure(series: dict[str, list[int]], path: str, title: str = "") -> str:
    """Bar plot of one or more Hilbert series, written to ``path``."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 3.5))
    k = len(series)
    width = 0.8 / max(k, 1)
    for j, (label, h) in enumerate(series.items()):
        xs = [d + (j - (k - 1) / 2) * width for d in range(len(h))]
        ax.bar(xs, h, width=width, label=f"{label} (dim {sum(h)})")
    ax.set_xlabel("degree")
    ax.set_ylabel("dimension")
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
