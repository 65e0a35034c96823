"""Built-in lifting cases and the JSON case-file loader.

A case file looks like::

    {
      "id": "ufo7b",
      "n": 12,
      "params": {"zeta": "z12"},
      "diagram": {"vertices": ["zeta^4", "-1"], "edge": "zeta^11"},
      "strata": [[{"id": "x1^3", "rel": "x1^3", "lambda": "l1"}, ...], ...],
      "realizations": [
        {"tag": "l2", "q": [["zeta^4", "1"], ["zeta^11", "-1"]]},
        {"tag": "finite", "q": ..., "group_orders": [12, 12],
         "grouplikes": [[1, 0], [0, 1]], "char_values": [["z12^4", ...], ...]}
      ],
      "macros": {"l123": "(4*l1*l2 - l3)"},
      "expected": {"lifting": {rid: {"lhs": ..., "rhs": ...}}, "cleft": {...},
                   "admissibility": {"never": [rid, ...], "pairs": {...}}}
    }

Scalars are expressions in the relation syntax.  Within a realization the
names q11, q12, q21, q22 (and qij in general) are bound to its braiding.
Without an explicit group the realization is Gamma = Z^theta.
"""

from __future__ import annotations

import json
import re
from importlib import resources
from pathlib import Path

from .bosonization import Realization, RealizationError
from .braided import BraidingMatrix
from .cyclotomic import CycNum, root_log
from .expr import Scope, parse, to_poly
from .freealg import CycField
from .lifting import LiftingCase

__all__ = [
    "CatalogEntry",
    "CaseFileError",
    "cartan_matrix",
    "check_admissibility",
    "expected_outputs",
    "ids",
    "load",
    "load_all",
    "load_file",
    "parse_case",
]


class CaseFileError(ValueError):
    pass


def eval_scalar(text: str, params: dict, n: int) -> CycNum:
    """Value of a scalar expression such as ``-zeta^3`` or ``z12^4``."""
    e = parse(str(text), Scope(2, params, (), allow_groups=False))
    p = to_poly(e, CycField(n), 2)
    if any(w for w in p.terms):
        raise CaseFileError(f"{text!r} is not a scalar")
    c = p.terms.get("")
    return c if c is not None else CycNum.rational(0, n)


class CatalogEntry:
    """A case file: shared relation data plus one LiftingCase per realization."""

    def __init__(self, data: dict, source: str = "") -> None:
        self.data = data
        self.source = source
        self.id = data["id"]
        self.title = data.get("title", self.id)
        self.notes = data.get("notes", "")
        self.n = int(data.get("n", 0)) or None
        try:
            self.cases = [self._case(r) for r in self._realization_specs()]
        except RealizationError:
            raise
        except (KeyError, TypeError) as exc:
            raise CaseFileError(f"{self.id}: malformed case file ({exc})") from exc

    # ----------------------------------------------------------------
    def _realization_specs(self) -> list[dict]:
        if "realizations" in self.data:
            return self.data["realizations"]
        if "braiding" in self.data:
            spec = {"tag": "default", "q": self.data["braiding"]}
            for k in ("group_orders", "grouplikes", "char_values"):
                if k in self.data:
                    spec[k] = self.data[k]
            return [spec]
        raise CaseFileError(f"{self.id}: no braiding or realizations")

    def base_params(self, n: int) -> dict:
        params: dict = {}
        for name, text in self.data.get("params", {}).items():
            params[name] = eval_scalar(text, params, n)
        return params

    def _case(self, spec: dict) -> LiftingCase:
        rows = spec["q"]
        n = self.n or _guess_n(rows)
        params = self.base_params(n)
        qs = [[eval_scalar(x, params, n) for x in row] for row in rows]
        B = BraidingMatrix.from_scalars(qs, n)
        if "group_orders" in spec:
            from math import lcm

            cv = [[eval_scalar(str(v), params, lcm(n, _guess_n([[v]]))) for v in row]
                  for row in spec["char_values"]]
            R = Realization.from_values(B, spec["group_orders"], spec["grouplikes"], cv)
        else:
            R = Realization.standard(B)
        th = B.theta
        for i in range(th):
            for j in range(th):
                params[f"q{i + 1}{j + 1}"] = qs[i][j]
        strata = [[(r["id"], self.expand(r["rel"]), r.get("lambda")) for r in st] for st in self.data["strata"]]
        diagram = None
        if "diagram" in self.data and th == 2:
            d = self.data["diagram"]
            diagram = {
                "vertices": [eval_scalar(v, params, n) for v in d["vertices"]],
                "edge": eval_scalar(d["edge"], params, n),
            }
        expected = self._expected()
        return LiftingCase.build(self.id, R, strata, params, expected, spec.get("tag", ""), self.notes, diagram)

    def expand(self, text: str) -> str:
        for name, body in self.data.get("macros", {}).items():
            text = re.sub(rf"\b{re.escape(name)}\b", f"({body})", text)
        return text

    def _expected(self) -> dict | None:
        exp = self.data.get("expected")
        if not exp:
            return None
        out: dict = {}
        for side in ("cleft", "lifting"):
            if side in exp:
                out[side] = {rid: {"lhs": self.expand(v["lhs"]), "rhs": self.expand(v["rhs"])}
                             for rid, v in exp[side].items()}
        return out

    def case(self, tag: str | None = None) -> LiftingCase:
        if tag is None:
            return self.cases[0]
        for c in self.cases:
            if c.tag == tag:
                return c
        raise KeyError(f"{self.id} has no realization {tag!r}")

    @property
    def expected(self) -> dict:
        return self.data.get("expected", {})

    def realization_expectations(self, tag: str) -> dict:
        for spec in self._realization_specs():
            if spec.get("tag") == tag:
                return spec
        return {}


def _guess_n(rows) -> int:
    from math import lcm

    n = 1
    for row in rows:
        for x in row:
            for m in re.findall(r"z(\d+)", str(x)):
                n = lcm(n, int(m))
            if str(x).strip().startswith("-"):
                n = lcm(n, 2)
    return n


# --------------------------------------------------------------------------
# loading


def _case_dir():
    return resources.files("hopflift") / "cases"


def ids() -> list[str]:
    out = []
    for p in _case_dir().iterdir():
        if p.name.endswith(".json"):
            out.append(json.loads(p.read_text())["id"])
    return sorted(out, key=_id_key)


def _id_key(s: str):
    order = ["ufo7a", "ufo7b", "ufo7c", "ufo8a", "ufo8b", "ufo8c",
             "br2a-q-1", "br2a-q-zeta", "br2a-N4", "br2a-N6", "br2a-N12"]
    return (order.index(s) if s in order else len(order), s)


def entry(id: str) -> CatalogEntry:
    for p in _case_dir().iterdir():
        if p.name.endswith(".json"):
            data = json.loads(p.read_text())
            if data["id"] == id:
                return CatalogEntry(data, p.name)
    raise KeyError(f"unknown case {id!r}; known: {', '.join(ids())}")


def load(id: str, tag: str | None = None) -> LiftingCase:
    """The LiftingCase of a catalog entry (first realization by default)."""
    return entry(id).case(tag)


def load_all() -> list[CatalogEntry]:
    return [entry(i) for i in ids()]


def expected_outputs(id: str) -> dict:
    return entry(id).expected


def parse_case(data: dict, source: str = "") -> CatalogEntry:
    if "id" not in data:
        data = dict(data, id=Path(source).stem or "case")
    if "strata" not in data and "relations" in data:
        data = dict(data, strata=[data["relations"]])
    return CatalogEntry(data, source)


def load_file(path: str | Path) -> CatalogEntry:
    p = Path(path)
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise CaseFileError(f"{p}: not valid JSON ({exc})") from exc
    return parse_case(data, str(p))


# --------------------------------------------------------------------------
# diagram checks


def dynkin_labels(B: BraidingMatrix) -> dict:
    """Vertex labels q_ii and edge labels q_ij q_ji."""
    th = B.theta
    return {
        "vertices": [B.q(i, i) for i in range(1, th + 1)],
        "edges": {(i, j): B.q(i, j) * B.q(j, i) for i in range(1, th + 1) for j in range(i + 1, th + 1)},
    }


def cartan_matrix(B: BraidingMatrix, limit: int = 64) -> list[list[int]]:
    """a_ij = -min{m : (m+1)_{q_ii} (1 - q_ii^m q_ij q_ji) = 0}."""
    th = B.theta
    out = [[2] * th for _ in range(th)]
    for i in range(1, th + 1):
        qii = B.q(i, i)
        for j in range(1, th + 1):
            if i == j:
                continue
            edge = B.q(i, j) * B.q(j, i)
            for m in range(limit):
                pw = qii ** m
                qnum = sum((qii ** k for k in range(m + 1)), CycNum.rational(0, B.n))
                if qnum.is_zero() or (1 - pw * edge).is_zero():
                    out[i - 1][j - 1] = -m
                    break
            else:
                raise ValueError("Cartan entry not found")
    return out


def same_root(a: CycNum, b: CycNum) -> bool:
    return root_log(a) == root_log(b)


def check_admissibility(entry: CatalogEntry) -> list[dict]:
    """Compare the admissibility scan with the entry's expected constraints.

    ``never`` lists relations whose lambda is admissible for no split of the
    edge label; ``singles`` and ``pairs`` give the exact sets of q12 values
    for which one lambda, or a product of two, may be nonzero.
    """
    from fractions import Fraction

    from .lifting import _scan_splits

    exp = entry.expected.get("admissibility") or {}
    case = entry.cases[0]
    scan = _scan_splits(case)
    K = scan["K"]
    sets = {k: {Fraction(t, K) for t in v} for k, v in scan["_sets"].items()}
    pair_sets = {f"{a}*{b}": sets[a] & sets[b] for a in sets for b in sets if a != b}
    n = entry.n or case.realization.n
    params = entry.base_params(n)

    def roots(texts):
        out = set()
        for t in texts:
            lg = root_log(eval_scalar(t, params, n))
            if lg is None:
                raise CaseFileError(f"{entry.id}: {t!r} is not a root of unity")
            out.add(lg)
        return out

    rows = []
    for rid in exp.get("never", []):
        slot = case.relation(rid).slot
        found = sorted(sets.get(slot, set())) if slot else []
        rows.append({"kind": "never", "key": rid, "expected": [], "found": [str(x) for x in found],
                     "match": not found})
    for kind, table in (("single", exp.get("singles", {})), ("pair", exp.get("pairs", {}))):
        for key, texts in table.items():
            want = roots(texts)
            got = sets.get(key, set()) if kind == "single" else pair_sets.get(key, set())
            rows.append({"kind": kind, "key": key, "expected": sorted(str(x) for x in want),
                         "found": sorted(str(x) for x in got), "match": want == got})
    return rows
