"""Two-sided noncommutative Groebner bases, truncated by degree.

Overlaps are resolved one degree at a time.  At degree d every overlap
polynomial (and every generator) of degree d is reduced by the basis
elements of smaller degree, the surviving rows are inter-reduced among
themselves, and the new monic elements join the basis.  Elements of degree
below d never change afterwards, so normal forms of short words can be
memoised for good.

Normal forms are computed by right multiplication: NF(w x) is obtained from
NF(w) one letter at a time, and the memo table holds NF(v x) for normal
words v.  Its size is therefore bounded by theta times the number of normal
words seen.

Inputs need not be homogeneous.  For filtered inputs a row whose top-degree
part cancels but whose remainder survives is a "degree drop".  If the
remainder has a unit leading coefficient it is fed back as a new generator
and the computation restarts; otherwise (a symbolic leading coefficient,
e.g. a multiple of lambda) ``NonFlatError`` is raised.
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass, field
from typing import Callable

from .expr import Expr, evaluate, has_groups, max_degree, multideg, symbols
from .freealg import NCPoly, NonUnitError, format_word, letter, order_key

__all__ = [
    "DEFAULT_CAP",
    "GBasis",
    "NonFlatError",
    "buchberger",
    "dimension",
    "hilbert_series",
    "leading_word_set",
    "normal_form",
]

UNKNOWN = "infinite/unknown at bound"


def default_cap() -> int:
    return int(os.environ.get("HOPFLIFT_DEGREE_CAP", "60"))


DEFAULT_CAP = 60


class NonFlatError(ArithmeticError):
    """A symbolic computation produced a lower-degree element."""

    def __init__(self, msg: str, remainder=None) -> None:
        super().__init__(msg)
        self.remainder = remainder


class DegreeOverflow(ValueError):
    pass


def _relabel_table(order: str | None, theta: int):
    """Translation tables external word <-> internal word for a precedence."""
    if not order:
        return None, None
    if len(order) != theta or sorted(order) != [str(i) for i in range(1, theta + 1)]:
        raise ValueError(f"bad letter precedence {order!r}")
    fwd = {letter(int(ch)): chr(97 + k) for k, ch in enumerate(order)}
    if all(k == v for k, v in fwd.items()):
        return None, None
    back = {v: k for k, v in fwd.items()}
    return str.maketrans(fwd), str.maketrans(back)


@dataclass
class GBasis:
    """A (possibly truncated) reduced Groebner basis.

    Internally all words are relabelled so that the chosen precedence is the
    natural string order; public methods translate back and forth.
    """

    ring: object
    theta: int
    order: str | None = None
    generators: list = field(default_factory=list)
    polys: list = field(default_factory=list)  # internal words, monic
    lead: dict = field(default_factory=dict)
    degree_bound: int = 0
    complete: bool = False
    graded: bool = True
    normal_by_deg: list = field(default_factory=list)
    pairs_processed: int = 0
    pairs_zero: int = 0
    restarts: int = 0

    def __post_init__(self) -> None:
        self._fwd, self._back = _relabel_table(self.order, self.theta)
        self._memo: dict = {}
        self._lens: list[int] = []
        self.one = self.ring.one
        letters_ext = [letter(i) for i in range(1, self.theta + 1)]
        self.letters = sorted(self._to_int(x) for x in letters_ext)
        self._md = {}
        for x in self.letters:
            md = [0] * self.theta
            md[ord(self._to_ext(x)) - 97] = 1
            self._md[x] = tuple(md)

    # -- relabelling
    def _to_int(self, w: str) -> str:
        return w.translate(self._fwd) if self._fwd else w

    def _to_ext(self, w: str) -> str:
        return w.translate(self._back) if self._back else w

    def internal(self, p: NCPoly) -> dict:
        return {self._to_int(w): c for w, c in p.terms.items()}

    def external(self, d: dict) -> NCPoly:
        return NCPoly({self._to_ext(w): c for w, c in d.items()}, self.ring, self.theta)

    # -- reduction machinery
    def _suffix_lead(self, w: str):
        lead = self.lead
        n = len(w)
        for L in self._lens:
            if L > n:
                break
            s = w[n - L:] if L else ""
            i = lead.get(s)
            if i is not None:
                return n - L, i
        return None

    def nf_word(self, w: str) -> dict:
        """Normal form of an internal word, as a dict."""
        memo = self._memo
        r = memo.get(w)
        if r is not None:
            return r
        # find the longest prefix already known, then fold letters on
        k = max(len(w) - 1, 0)
        while k > 0 and w[:k] not in memo:
            k -= 1
        if k == 0:
            vec = {"": self.one}
        else:
            vec = memo[w[:k]]
        for j in range(k, len(w)):
            vec = self._mul_letter(vec, w[j])
            memo[w[: j + 1]] = vec
        return vec

    def _entry(self, vx: str) -> dict:
        """NF(v x) where v is a normal word."""
        memo = self._memo
        r = memo.get(vx)
        if r is not None:
            return r
        hit = self._suffix_lead(vx)
        if hit is None:
            r = {vx: self.one}
        else:
            pos, i = hit
            a = vx[:pos]
            g = self.polys[i]
            lw = vx[pos:]
            acc: dict = {}
            for w, c in g.items():
                if w == lw:
                    continue
                _add_scaled(acc, self.nf_word(a + w), -c)
            r = acc
        memo[vx] = r
        return r

    def _mul_letter(self, vec: dict, x: str) -> dict:
        acc: dict = {}
        twisted = self.ring.twisted
        md = self._md[x]
        for v, c in vec.items():
            e = self._entry(v + x)
            if twisted:
                c = self.ring.twist(c, md)
            _add_scaled(acc, e, c)
        return acc

    def nf_dict(self, p: dict) -> dict:
        acc: dict = {}
        for w, c in p.items():
            _add_scaled(acc, self.nf_word(w), c)
        return acc

    # -- public helpers
    def normal_form(self, p: NCPoly) -> NCPoly:
        if not self.complete and p.degree() > self.degree_bound:
            raise DegreeOverflow(
                f"degree {p.degree()} exceeds the bound {self.degree_bound} of an incomplete basis"
            )
        return self.external(self.nf_dict(self.internal(p)))

    def reduces_to_zero(self, p: NCPoly) -> bool:
        return not self.normal_form(p).terms

    def is_normal_word(self, w: str) -> bool:
        wi = self._to_int(w)
        return all(wi[i:i + L] not in self.lead for L in self._lens for i in range(len(wi) - L + 1))

    def basis(self) -> list[NCPoly]:
        keyf = order_key(self.order)
        out = [self.external(p) for p in self.polys]
        out.sort(key=lambda q: keyf(q.leading_word(self.order)))
        return out

    def leading_words(self) -> set[str]:
        return {self._to_ext(w) for w in self.lead}

    def normal_words(self) -> list[str]:
        return [self._to_ext(w) for ws in self.normal_by_deg for w in ws]

    def hilbert(self) -> list[int]:
        return [len(ws) for ws in self.normal_by_deg]

    def multigraded_hilbert(self) -> dict[tuple[int, ...], int]:
        out: dict = {}
        for w in self.normal_words():
            md = tuple(w.count(letter(i)) for i in range(1, self.theta + 1))
            out[md] = out.get(md, 0) + 1
        return out

    def dimension(self):
        if not self.complete:
            return UNKNOWN
        return sum(self.hilbert())

    def top_degree(self) -> int:
        return max((d for d, ws in enumerate(self.normal_by_deg) if ws), default=0)

    def summary(self) -> str:
        lines = [f"{len(self.polys)} elements, complete={self.complete}, bound={self.degree_bound}"]
        for q in self.basis():
            lines.append(f"  {q}")
        return "\n".join(lines)


class ReducedAlgebra:
    """Evaluate expressions modulo the current basis, reducing after each
    product.  Values are dicts over internal words."""

    def __init__(self, G: GBasis, braiding=None) -> None:
        self.G = G
        self.braiding = braiding
        self.ring = G.ring

    def letter(self, i: int) -> dict:
        return self.G.nf_word(self.G._to_int(letter(i)))

    def scalar(self, c) -> dict:
        c = self.ring.scalar(c)
        return {"": c} if not c.is_zero() else {}

    def lam(self, name: str) -> dict:
        return {"": self.ring.lam(name)}

    def group(self, gam) -> dict:
        return {"": self.ring.group(gam)}

    def one(self) -> dict:
        return {"": self.G.one}

    def add(self, a: dict, b: dict) -> dict:
        out = dict(a)
        _add_scaled(out, b, self.G.one)
        return out

    def neg(self, a: dict) -> dict:
        return {w: -c for w, c in a.items()}

    def mul(self, a: dict, b: dict) -> dict:
        G = self.G
        acc: dict = {}
        for w, d in b.items():
            vec = a
            for x in w:
                vec = G._mul_letter(vec, x)
            _add_scaled(acc, vec, d)
        return acc

    def inv_scalar(self, a: dict) -> dict:
        if set(a) != {""}:
            raise ValueError("division by a non-scalar")
        return {"": self.ring.unit_inverse(a[""])}

    def chi(self, da, db):
        if self.braiding is None:
            raise ValueError("braided commutator needs a braiding")
        return self.braiding.chi(da, db)


def _add_scaled(acc: dict, vec: dict, c) -> None:
    for w, v in vec.items():
        x = v * c
        old = acc.get(w)
        if old is None:
            if not x.is_zero():
                acc[w] = x
        else:
            x = old + x
            if x.is_zero():
                del acc[w]
            else:
                acc[w] = x


def _maxword(p: dict) -> str:
    return max(p, key=lambda w: (len(w), w))


def _is_graded(gens: list, ring, theta: int) -> bool:
    for g in gens:
        if isinstance(g, Expr):
            if multideg(g, theta) is None or symbols(g) or has_groups(g):
                return False
            continue
        if len({len(w) for w in g}) > 1:
            return False
        if not all(ring.is_scalar(c) for c in g.values()):
            return False
    return True


def _overlaps(lead: dict, new_words: list[str], all_words: list[str]):
    """Proper overlaps u = A B, v = B C with u or v among new_words.

    Yields (degree, A, index of v's polynomial).
    """
    by_prefix: dict[str, list[str]] = {}
    for v in all_words:
        for k in range(1, len(v)):
            by_prefix.setdefault(v[:k], []).append(v)
    new = set(new_words)
    seen = set()
    for u in all_words:
        for k in range(1, len(u)):
            b = u[len(u) - k:]
            for v in by_prefix.get(b, ()):
                if u not in new and v not in new:
                    continue
                key = (u, v, k)
                if key in seen:
                    continue
                seen.add(key)
                a = u[: len(u) - k]
                yield len(u) + len(v) - k, a, lead[v], u


def buchberger(
    gens: list[NCPoly],
    bound: int | None = None,
    order: str | None = None,
    *,
    trace: Callable[[str], None] | None = None,
    cap: int | None = None,
    allow_restart: bool = True,
    ring=None,
    theta: int | None = None,
    braiding=None,
) -> GBasis:
    """Reduced Groebner basis of the two-sided ideal generated by ``gens``.

    Generators are ``NCPoly`` values or expression trees; trees are evaluated
    at their own degree modulo the basis built so far (``ring``, ``theta``
    and ``braiding`` are then required).  ``bound`` caps the degree of
    overlaps resolved; if None it starts at 2 + 2 * (max generator degree)
    and is raised up to ``cap`` until the basis is certified complete.
    """
    gens = [g for g in gens if isinstance(g, Expr) or g.terms]
    if not gens:
        raise ValueError("no nonzero generators")
    polys = [g for g in gens if not isinstance(g, Expr)]
    if polys:
        ring = ring or polys[0].ring
        theta = theta or polys[0].theta
    if ring is None or theta is None:
        raise ValueError("ring and theta are needed for expression generators")
    maxdeg = max(_gen_degree(g) for g in gens)
    if cap is None:
        # the cap never undercuts the default starting bound
        cap = max(default_cap(), 2 + 2 * maxdeg)
    if bound is None:
        bound = min(max(2 + 2 * maxdeg, maxdeg), cap)
        auto = True
    else:
        auto = False
    extra: list[dict] = []
    restarts = 0
    while True:
        G = GBasis(ring, theta, order, generators=list(gens))
        rows0 = [g if isinstance(g, Expr) else G.internal(g) for g in gens] + extra
        G.graded = _is_graded(rows0, ring, theta)
        G.restarts = restarts
        drops, from_gens = _run(G, rows0, bound, trace, braiding)
        if drops:
            if not allow_restart or not all(_unit_lead(ring, r) for r in drops):
                raise NonFlatError("degree drop during completion", G.external(drops[0]))
            restarts += 1
            extra.extend(drops)
            if trace:
                trace(f"restart: {len(drops)} lower-degree elements found")
            continue
        if G.complete or not auto or bound >= cap:
            return G
        bound = min(cap, bound * 2)


def _char_split(row: dict, ring, theta: int) -> list[dict]:
    parts: dict = {}
    for w, c in row.items():
        md = [0] * theta
        for ch in w:
            md[ord(ch) - 97] += 1
        key = tuple(ring.char_exp(e, md) for e in _unit_vectors(ring.rank))
        parts.setdefault(key, {})[w] = c
    return list(parts.values())


def _unit_vectors(k: int) -> list[tuple[int, ...]]:
    return [tuple(int(i == j) for j in range(k)) for i in range(k)]


def _unit_lead(ring, row: dict) -> bool:
    try:
        ring.unit_inverse(row[_maxword(row)])
    except (NonUnitError, ArithmeticError):
        return False
    return True


def _gen_degree(g) -> int:
    if isinstance(g, Expr):
        return max_degree(g)
    if isinstance(g, NCPoly):
        return g.degree()
    return len(_maxword(g))


def _run(G: GBasis, rows0: list, bound: int, trace, braiding=None):
    """Run the staged completion.  Returns (drops, drops_from_generators)."""
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))
    ring = G.ring
    G.degree_bound = bound
    G.normal_by_deg = [[""]]
    alg = ReducedAlgebra(G, braiding)
    gens_by_deg: dict[int, list] = {}
    for r in rows0:
        if isinstance(r, Expr) or r:
            gens_by_deg.setdefault(_gen_degree(r), []).append(r)
    pending: dict[int, list] = {}
    max_gen = max(gens_by_deg) if gens_by_deg else 0
    d = -1
    while True:
        d += 1
        if d > bound:
            G.complete = False
            return [], False
        rows = []
        for g in gens_by_deg.get(d, ()):
            if isinstance(g, Expr):
                rows.append(evaluate(g, alg, G.theta))
            else:
                rows.append(G.nf_dict(g))
        if getattr(ring, "twisted", False):
            # the ideal is stable under conjugation by the group, so it
            # contains each character-homogeneous part of a generator
            rows = [part for row in rows for part in _char_split(row, ring, G.theta)]
        ngen = len(rows)
        if d == 0:
            nz = [r for r in rows if r]
            if nz:
                # a unit constant generates everything
                ring.unit_inverse(nz[0][""])
                G.polys.append({"": G.one})
                G.lead[""] = 0
                G._lens.append(0)
                G.normal_by_deg = []
                G.complete = True
                return [], False
            continue
        for a, gi, _u in pending.pop(d, ()):
            g = G.polys[gi]
            acc: dict = {}
            for w, c in g.items():
                _add_scaled(acc, G.nf_word(a + w), c)
            G.pairs_processed += 1
            rows.append(acc)
            if trace:
                trace(f"overlap degree {d}: {'zero' if not acc else 'survives'}")
            if not acc:
                G.pairs_zero += 1
        pivots: dict[str, dict] = {}
        drops = []
        gen_drop = False
        for ri, row in enumerate(rows):
            while row:
                lw = _maxword(row)
                if len(lw) < d:
                    drops.append(row)
                    gen_drop = gen_drop or ri < ngen
                    break
                p = pivots.get(lw)
                if p is None:
                    lc = row[lw]
                    try:
                        inv = ring.unit_inverse(lc)
                    except (NonUnitError, ArithmeticError) as exc:
                        raise NonUnitError(f"non-unit leading coefficient at degree {d}") from exc
                    row = {w: c * inv for w, c in row.items()}
                    pivots[lw] = row
                    break
                c = row[lw]
                row = dict(row)
                _add_scaled(row, p, -c)
        if drops:
            return drops, gen_drop
        # back substitution among the new pivots
        keys = sorted(pivots)
        for i, k in enumerate(keys):
            p = pivots[k]
            for k2 in keys[:i]:
                c = p.get(k2)
                if c is not None:
                    p = dict(p)
                    _add_scaled(p, pivots[k2], -c)
            pivots[k] = p
        new_words = keys
        for k in keys:
            G.lead[k] = len(G.polys)
            G.polys.append(pivots[k])
        if new_words:
            if d not in G._lens:
                G._lens.append(d)
                G._lens.sort()
            # patch memo entries of this degree
            newset = set(new_words)
            memo = G._memo
            for w in [w for w in memo if len(w) == d]:
                vec = memo[w]
                hits = [u for u in vec if u in newset]
                if not hits:
                    continue
                vec = dict(vec)
                for u in hits:
                    c = vec.pop(u)
                    p = pivots[u]
                    for t, v in p.items():
                        if t != u:
                            _add_scaled(vec, {t: v}, -c)
                memo[w] = vec
            allw = list(G.lead)
            for deg, a, gi, u in _overlaps(G.lead, new_words, allw):
                pending.setdefault(deg, []).append((a, gi, u))
        # normal words of degree d
        prev = G.normal_by_deg[d - 1]
        cur = []
        lead = G.lead
        lens = G._lens
        for v in prev:
            for x in G.letters:
                w = v + x
                n = len(w)
                if any(w[n - L:] in lead for L in lens if L <= n):
                    continue
                cur.append(w)
        G.normal_by_deg.append(cur)
        if trace:
            trace(f"degree {d}: {len(new_words)} new elements, {len(cur)} normal words")
        if not cur and d >= max_gen:
            later = [k for k in pending if k > d]
            if G.graded or not later:
                # trim trailing empty degrees
                while len(G.normal_by_deg) > 1 and not G.normal_by_deg[-1]:
                    G.normal_by_deg.pop()
                G.complete = True
                return [], False


def normal_form(p: NCPoly, G: GBasis) -> NCPoly:
    return G.normal_form(p)


def hilbert_series(G: GBasis) -> list[int]:
    if not G.graded:
        raise ValueError("Hilbert series requested for inhomogeneous generators")
    return G.hilbert()


def dimension(G: GBasis):
    return G.dimension()


def leading_word_set(G: GBasis) -> set[str]:
    if not G.complete:
        raise ValueError("leading_word_set of an incomplete basis")
    return G.leading_words()


def describe_word(w: str) -> str:
    return format_word(w)
