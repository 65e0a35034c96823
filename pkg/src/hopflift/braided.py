"""Diagonal braidings on T(V): bicharacter, braided brackets, root vectors,
and the braided coproduct.

All braiding scalars are roots of unity, so they are stored as exponents of
a fixed primitive root zeta_n: q_ij = zeta_n^e[i][j].
"""

from __future__ import annotations

from math import lcm
from typing import Iterable

from .cyclotomic import CycNum, make_root, root_log
from .freealg import CycField, NCPoly, multidegree, word_multidegree, INHOMOGENEOUS

__all__ = [
    "BraidingMatrix",
    "TensorElem",
    "braided_commutator",
    "braided_tensor_mul",
    "coproduct",
    "counit",
    "is_primitive_mod",
    "lyndon_split",
    "root_vector",
]


class BraidingMatrix:
    """theta x theta matrix of roots of unity q_ij = zeta_n^exp[i][j]."""

    def __init__(self, exps: Iterable[Iterable[int]], n: int) -> None:
        self.exp = tuple(tuple(int(e) % n for e in row) for row in exps)
        self.theta = len(self.exp)
        if any(len(row) != self.theta for row in self.exp):
            raise ValueError("braiding matrix must be square")
        self.n = n
        self.field = CycField(n)
        self._roots = [make_root(n, k) for k in range(n)]

    @classmethod
    def from_scalars(cls, q, n: int | None = None) -> BraidingMatrix:
        """Build from a matrix of CycNum roots of unity."""
        logs = []
        den = 1
        for row in q:
            lrow = []
            for a in row:
                t = root_log(a)
                if t is None:
                    raise ValueError(f"{a} is not a root of unity")
                lrow.append(t)
                den = lcm(den, t.denominator)
            logs.append(lrow)
        if n is None:
            n = den
        elif n % den:
            raise ValueError(f"entries are not n-th roots of unity for n={n}")
        return cls([[int(t * n) for t in row] for row in logs], n)

    def q(self, i: int, j: int) -> CycNum:
        """q_ij with 1-based indices."""
        return self._roots[self.exp[i - 1][j - 1]]

    def matrix(self) -> list[list[CycNum]]:
        return [[self.q(i, j) for j in range(1, self.theta + 1)] for i in range(1, self.theta + 1)]

    def chi_exp(self, a, b) -> int:
        s = 0
        for i, ai in enumerate(a):
            if ai:
                row = self.exp[i]
                for j, bj in enumerate(b):
                    if bj:
                        s += ai * bj * row[j]
        return s % self.n

    def chi(self, a, b) -> CycNum:
        """Bicharacter chi(a, b) = prod q_ij^(a_i b_j)."""
        return self._roots[self.chi_exp(a, b)]

    def root(self, k: int) -> CycNum:
        return self._roots[k % self.n]

    def __eq__(self, other) -> bool:
        return isinstance(other, BraidingMatrix) and (self.exp, self.n) == (other.exp, other.n)

    def __hash__(self) -> int:
        return hash((self.exp, self.n))

    def __repr__(self) -> str:
        return f"BraidingMatrix({self.exp}, n={self.n})"


def braided_commutator(u: NCPoly, v: NCPoly, B: BraidingMatrix) -> NCPoly:
    """[u, v]_c = u v - chi(deg u, deg v) v u for homogeneous u, v."""
    du, dv = multidegree(u), multidegree(v)
    if du == INHOMOGENEOUS or dv == INHOMOGENEOUS:
        raise ValueError("braided commutator of inhomogeneous elements")
    return u * v - (v * u).scale(B.chi(du, dv))


def lyndon_split(name: str) -> tuple[str, str] | None:
    """Standard factorization of a Lyndon word under the precedence that
    makes its first letter the smallest.

    Returns (u, v) with v the longest proper Lyndon suffix, or None for a
    single letter.  Raises ValueError if ``name`` is not Lyndon.
    """
    if len(name) == 1:
        return None
    first = name[0]
    key = lambda s: tuple((0 if ch == first else 1, ch) for ch in s)  # noqa: E731
    if not _is_lyndon(name, key):
        raise ValueError(f"root vector name {name!r} is not a Lyndon word")
    for k in range(1, len(name)):
        v = name[k:]
        if _is_lyndon(v, key):
            return name[:k], v
    raise AssertionError("unreachable")


def _is_lyndon(w: str, key) -> bool:
    kw = key(w)
    return all(kw < key(w[k:] + w[:k]) for k in range(1, len(w)))


def root_vector(name: str, B: BraidingMatrix) -> NCPoly:
    """Root vector x_name, bracketed by the standard Lyndon factorization.

    "12" -> [x1,x2]_c, "112" -> [x1,x12]_c, "122" -> [x12,x2]_c,
    "11212" -> [x112,x12]_c, "221" -> [x2,[x2,x1]_c]_c.
    """
    if not name or any(not ch.isdigit() or not 1 <= int(ch) <= B.theta for ch in name):
        raise ValueError(f"malformed root vector name {name!r}")
    return _root_vector(name, B)


def _root_vector(name: str, B: BraidingMatrix) -> NCPoly:
    split = lyndon_split(name)
    if split is None:
        return NCPoly.gen(int(name), B.field, B.theta)
    u, v = split
    return braided_commutator(_root_vector(u, B), _root_vector(v, B), B)


# --------------------------------------------------------------------------
# tensor square


class TensorElem:
    """Element of T(V) (x) T(V): dict (word, word) -> CycNum."""

    __slots__ = ("terms", "B")

    def __init__(self, terms: dict, B: BraidingMatrix) -> None:
        self.terms = {k: c for k, c in terms.items() if not c.is_zero()}
        self.B = B

    def __add__(self, other: TensorElem) -> TensorElem:
        acc = dict(self.terms)
        _tadd(acc, other.terms, None)
        return TensorElem(acc, self.B)

    def __neg__(self) -> TensorElem:
        return TensorElem({k: -c for k, c in self.terms.items()}, self.B)

    def __sub__(self, other: TensorElem) -> TensorElem:
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, TensorElem):
            return braided_tensor_mul(self, other)
        return TensorElem({k: c * other for k, c in self.terms.items()}, self.B)

    __rmul__ = lambda self, other: self.__mul__(other)  # noqa: E731

    def __eq__(self, other) -> bool:
        return isinstance(other, TensorElem) and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    @classmethod
    def pure(cls, a: NCPoly, b: NCPoly, B: BraidingMatrix) -> TensorElem:
        out: dict = {}
        for w1, c1 in a.terms.items():
            for w2, c2 in b.terms.items():
                out[(w1, w2)] = c1 * c2
        return cls(out, B)

    def __str__(self) -> str:
        from .freealg import format_word
        from .cyclotomic import format_cyc

        if not self.terms:
            return "0"
        parts = []
        for (a, b), c in sorted(self.terms.items(), key=lambda t: (len(t[0][0]), t[0])):
            s = format_cyc(c)
            parts.append(f"({s})*{format_word(a)}(x){format_word(b)}")
        return " + ".join(parts)


def _tadd(acc: dict, t: dict, scale) -> None:
    for k, c in t.items():
        if scale is not None:
            c = c * scale
        old = acc.get(k)
        if old is None:
            acc[k] = c
        else:
            s = old + c
            if s.is_zero():
                del acc[k]
            else:
                acc[k] = s


def braided_tensor_mul(s: TensorElem, t: TensorElem) -> TensorElem:
    """(a (x) b)(c (x) d) = chi(deg b, deg c) ac (x) bd."""
    B = s.B
    th = B.theta
    out: dict = {}
    for (a, b), c1 in s.terms.items():
        db = word_multidegree(b, th)
        for (c, d), c2 in t.terms.items():
            k = B.chi_exp(db, word_multidegree(c, th))
            coef = c1 * c2 if k == 0 else c1 * c2 * B.root(k)
            _tadd(out, {(a + c, b + d): coef}, None)
    return TensorElem(out, B)


def coproduct_word(w: str, B: BraidingMatrix, reduce=None) -> dict:
    """Delta of a word, built letter by letter.

    ``reduce`` (optional) maps a word to its normal form dict; it is applied
    to both legs after each step.
    """
    th = B.theta
    one = B.field.one
    vec: dict = {("", ""): one}
    for x in w:
        mdx = word_multidegree(x, th)
        nxt: dict = {}
        for (a, b), c in vec.items():
            # (a (x) b)(x (x) 1) and (a (x) b)(1 (x) x)
            k = B.chi_exp(word_multidegree(b, th), mdx)
            c1 = c if k == 0 else c * B.root(k)
            _tensor_accumulate(nxt, a + x, b, c1, reduce)
            _tensor_accumulate(nxt, a, b + x, c, reduce)
        vec = nxt
    return vec


def _tensor_accumulate(acc: dict, a: str, b: str, c, reduce) -> None:
    if reduce is None:
        _tadd(acc, {(a, b): c}, None)
        return
    ra = reduce(a)
    if not ra:
        return
    rb = reduce(b)
    if not rb:
        return
    for wa, ca in ra.items():
        for wb, cb in rb.items():
            _tadd(acc, {(wa, wb): c * ca * cb}, None)


def coproduct(p: NCPoly, B: BraidingMatrix) -> TensorElem:
    """Braided coproduct with Delta(x_i) = x_i (x) 1 + 1 (x) x_i."""
    out: dict = {}
    for w, c in p.terms.items():
        _tadd(out, coproduct_word(w, B), c)
    return TensorElem(out, B)


def counit(t: TensorElem, side: str = "left") -> NCPoly:
    """Apply the counit to one leg."""
    out: dict = {}
    for (a, b), c in t.terms.items():
        keep, drop = (b, a) if side == "left" else (a, b)
        if drop == "":
            old = out.get(keep)
            out[keep] = c if old is None else old + c
    return NCPoly(out, t.B.field, t.B.theta)


def is_primitive_mod(p: NCPoly, G, B: BraidingMatrix) -> bool:
    """True iff Delta(p) - p (x) 1 - 1 (x) p vanishes modulo I (x) T + T (x) I.

    ``G`` is a complete GBasis of I (or None for the zero ideal).  Both legs
    are reduced independently.
    """
    if G is None:
        reduce = None
    else:
        reduce = lambda w: G.external(G.nf_word(G._to_int(w))).terms  # noqa: E731
    out: dict = {}
    for w, c in p.terms.items():
        _tadd(out, coproduct_word(w, B, reduce), c)
    np_ = p.terms if G is None else G.normal_form(p).terms
    for w, c in np_.items():
        _tadd(out, {(w, ""): -c}, None)
        _tadd(out, {("", w): -c}, None)
    return not out
