"""The smash product T(V)#kGamma, its Hopf structure, and tensor squares
with independent normal forms on each leg.

Group elements are coefficients: a ``SmashElem`` is a polynomial whose
coefficients live in ``CoefRing`` = Q(zeta)[lambda][Gamma], with the group
part sitting to the right of each word.  Moving a word w past gamma costs
chi_w(gamma).

A tensor element of A (x) A is stored as dict (u, v) -> Coef over the
"doubled" ring Q(zeta)[lambda][Gamma x Gamma]: the first copy of Gamma is the
group part of the left leg, the second copy the group part of the right
leg.  Lambda symbols are scalars and are shared by both legs.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import Sequence

from .braided import BraidingMatrix
from .cyclotomic import CycNum, make_root, root_log
from .expr import Expr, ParseError, evaluate, poly_expr
from .freealg import CoefRing, NCPoly, letter, word_multidegree

__all__ = [
    "Realization",
    "RealizationError",
    "SmashElem",
    "SmashTensor",
    "TensorAlgebra",
    "antipode",
    "counit",
    "hopf_coproduct",
    "hopf_ideal_check",
    "smash_mul",
]


class RealizationError(ValueError):
    pass


@dataclass(frozen=True)
class Realization:
    """Grouplikes g_i in Gamma and characters chi_i with chi_j(g_i) = q_ij.

    ``char_exp[j][k]`` is the exponent e with chi_j(gamma_k) = zeta_n^e.
    ``group_orders[k]`` is 0 for an infinite cyclic factor.
    """

    braiding: BraidingMatrix
    group_orders: tuple[int, ...]
    grouplikes: tuple[tuple[int, ...], ...]
    char_exp: tuple[tuple[int, ...], ...]
    n: int

    def __post_init__(self) -> None:
        th = self.braiding.theta
        rk = len(self.group_orders)
        if len(self.grouplikes) != th or any(len(g) != rk for g in self.grouplikes):
            raise RealizationError("grouplikes must give one Gamma-element per letter")
        if len(self.char_exp) != th or any(len(c) != rk for c in self.char_exp):
            raise RealizationError("characters must give one value per group generator")
        if self.n % self.braiding.n:
            raise RealizationError("conductor must be a multiple of the braiding's")
        for j in range(th):
            for k, m in enumerate(self.group_orders):
                if m and (self.char_exp[j][k] * m) % self.n:
                    raise RealizationError(
                        f"chi_{j + 1}(gamma_{k + 1}) has order not dividing {m}"
                    )
        scale = self.n // self.braiding.n
        for i in range(th):
            for j in range(th):
                got = sum(a * e for a, e in zip(self.grouplikes[i], self.char_exp[j])) % self.n
                want = (self.braiding.exp[i][j] * scale) % self.n
                if got != want:
                    raise RealizationError(
                        f"realization equation violated: chi_{j + 1}(g_{i + 1}) != q_{i + 1}{j + 1}"
                    )

    # constructors
    @classmethod
    def standard(cls, B: BraidingMatrix) -> Realization:
        """Gamma = Z^theta, g_i the standard generators, chi_j(g_i) = q_ij."""
        th = B.theta
        grouplikes = tuple(tuple(int(i == k) for k in range(th)) for i in range(th))
        char_exp = tuple(tuple(B.exp[k][j] for k in range(th)) for j in range(th))
        return cls(B, (0,) * th, grouplikes, char_exp, B.n)

    @classmethod
    def from_values(
        cls,
        B: BraidingMatrix,
        group_orders: Sequence[int],
        grouplikes: Sequence[Sequence[int]],
        char_values: Sequence[Sequence[CycNum]],
    ) -> Realization:
        """``char_values[j][k]`` = chi_{j+1}(gamma_{k+1}), roots of unity."""
        logs = []
        n = B.n
        for row in char_values:
            lrow = []
            for v in row:
                t = root_log(v)
                if t is None:
                    raise RealizationError(f"character value {v} is not a root of unity")
                lrow.append(t)
                n = lcm(n, t.denominator)
            logs.append(lrow)
        char_exp = tuple(tuple(int(t * n) % n for t in row) for row in logs)
        return cls(
            B,
            tuple(int(m) for m in group_orders),
            tuple(tuple(int(a) for a in g) for g in grouplikes),
            char_exp,
            n,
        )

    # queries
    @property
    def theta(self) -> int:
        return self.braiding.theta

    @property
    def rank(self) -> int:
        return len(self.group_orders)

    def reduce(self, gam) -> tuple[int, ...]:
        return tuple(e % m if m else e for e, m in zip(gam, self.group_orders))

    def g_of(self, md) -> tuple[int, ...]:
        """g_r = prod g_j^{a_j} for a multidegree a."""
        out = [0] * self.rank
        for a, g in zip(md, self.grouplikes):
            for k, e in enumerate(g):
                out[k] += a * e
        return self.reduce(out)

    def chi_exp_on(self, md, k: int) -> int:
        """Exponent of chi_md(gamma_k) as a power of zeta_n."""
        return sum(a * self.char_exp[j][k] for j, a in enumerate(md)) % self.n

    def chi_trivial(self, md) -> bool:
        """chi_md = epsilon on Gamma."""
        return all(self.chi_exp_on(md, k) == 0 for k in range(self.rank))

    def same_character(self, md1, md2) -> bool:
        return all(self.chi_exp_on(md1, k) == self.chi_exp_on(md2, k) for k in range(self.rank))

    def is_identity(self, gam) -> bool:
        return not any(self.reduce(gam))

    def ring(self, lam_names=(), lam_degrees=()) -> CoefRing:
        th = self.theta
        chi = tuple(tuple(self.char_exp[j][k] for j in range(th)) for k in range(self.rank))
        return CoefRing(self.n, chi, self.group_orders, tuple(lam_names), tuple(map(tuple, lam_degrees)))

    def to_json(self) -> dict:
        from .cyclotomic import format_cyc

        return {
            "group_orders": list(self.group_orders),
            "grouplikes": [list(g) for g in self.grouplikes],
            "char_values": [[format_cyc(make_root(self.n, e)) for e in row] for row in self.char_exp],
        }


# --------------------------------------------------------------------------
# smash elements


class SmashElem(NCPoly):
    """Element of T(V)#kGamma: words with Q(zeta)[lambda][Gamma] coefficients."""

    __slots__ = ()

    @classmethod
    def group(cls, ring: CoefRing, gam, theta: int = 2) -> SmashElem:
        return cls({"": ring.group(gam)}, ring, theta)

    @classmethod
    def letter(cls, i: int, ring: CoefRing, theta: int = 2) -> SmashElem:
        return cls({letter(i): ring.one}, ring, theta)

    @classmethod
    def of(cls, p: NCPoly) -> SmashElem:
        return cls(p.terms, p.ring, p.theta)

    def monomials(self):
        """Iterate (word, lambda exponents, gamma, scalar)."""
        for w, c in self.terms.items():
            for (lam, gam), v in c.d.items():
                yield w, lam, gam, v


def smash_mul(s: NCPoly, t: NCPoly) -> SmashElem:
    if s.ring != t.ring or s.theta != t.theta:
        raise RealizationError("smash product of elements over different realizations")
    return SmashElem.of(s * t)


# --------------------------------------------------------------------------
# tensor squares


def doubled_ring(ring: CoefRing) -> CoefRing:
    """Q(zeta)[lambda][Gamma x Gamma]; letters 1..theta act on the left copy,
    letters theta+1..2theta on the right copy."""
    th = len(ring.chi_exp[0]) if ring.chi_exp else 0
    rows = [tuple(row) + (0,) * th for row in ring.chi_exp]
    rows += [(0,) * th + tuple(row) for row in ring.chi_exp]
    return CoefRing(ring.n, tuple(rows), ring.group_orders * 2, ring.lam_names, ring.lam_degrees)


class SmashTensor:
    """Element of A (x) A: dict (u, v) -> Coef over the doubled ring."""

    __slots__ = ("terms", "ring", "theta")

    def __init__(self, terms: dict, ring: CoefRing, theta: int) -> None:
        self.terms = {k: c for k, c in terms.items() if c}
        self.ring = ring  # the doubled ring
        self.theta = theta

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, SmashTensor) and self.terms == other.terms

    def __sub__(self, other: SmashTensor) -> SmashTensor:
        acc = dict(self.terms)
        _acc(acc, {k: -c for k, c in other.terms.items()})
        return SmashTensor(acc, self.ring, self.theta)

    def __add__(self, other: SmashTensor) -> SmashTensor:
        acc = dict(self.terms)
        _acc(acc, other.terms)
        return SmashTensor(acc, self.ring, self.theta)

    def split_terms(self):
        """Iterate (u, gamma_left, v, gamma_right, lambda exponents, scalar)."""
        rk = len(self.ring.group_orders) // 2
        for (u, v), c in self.terms.items():
            for (lam, gam), x in c.d.items():
                yield u, gam[:rk], v, gam[rk:], lam, x

    def __str__(self) -> str:
        from .cyclotomic import format_cyc
        from .freealg import format_word

        if not self.terms:
            return "0"
        names = self.ring.lam_names
        parts = []

        def grp(g):
            return "*".join(f"g{k + 1}" + (f"^{e}" if e != 1 else "") for k, e in enumerate(g) if e)

        for u, gl, v, gr, lam, x in sorted(self.split_terms(), key=lambda t: (len(t[0]) + len(t[2]), t[:5])):
            mono = "*".join(nm + (f"^{k}" if k != 1 else "") for nm, k in zip(names, lam) if k)
            left = "*".join(s for s in (format_word(u) if u else "", grp(gl)) if s) or "1"
            right = "*".join(s for s in (format_word(v) if v else "", grp(gr)) if s) or "1"
            coef = format_cyc(x)
            if mono:
                coef = f"({coef})*{mono}"
            parts.append(f"{coef}*[{left} (x) {right}]")
        return " + ".join(parts)


def _acc(acc: dict, t: dict) -> None:
    for k, c in t.items():
        old = acc.get(k)
        if old is None:
            if c:
                acc[k] = c
        else:
            s = old + c
            if s:
                acc[k] = s
            else:
                del acc[k]


class TensorAlgebra:
    """Evaluate expressions in A (x) A' under x_i -> x_i (x) 1 + g_i (x) x_i,
    gamma -> gamma (x) gamma, reducing each leg by its own Groebner basis.

    ``left`` and ``right`` are GBasis objects over the realization's ring or
    None (no reduction).  The same class serves the Hopf coproduct of the
    smash algebra, the coaction of a cleft object into B#H, and the left
    coaction of L on a cleft object.
    """

    def __init__(self, R: Realization, ring: CoefRing, left=None, right=None) -> None:
        self.base = ring
        self.ring = doubled_ring(ring)
        self.theta = theta = R.theta
        self.left = left
        self.right = right
        self.braiding = R.braiding
        self.grouplikes = R.grouplikes
        self.rank = len(ring.group_orders)
        self._memo_l: dict = {}
        self._memo_r: dict = {}
        self._emb_l: dict = {}
        self._emb_r: dict = {}
        self.one_c = self.ring.one
        self._md = {letter(i): tuple(int(k == i - 1) for k in range(theta)) for i in range(1, theta + 1)}

    # embeddings of leg coefficients into the doubled ring
    def _embed(self, c, side: str):
        rk = self.rank
        z = (0,) * rk
        d = {}
        for (lam, gam), v in c.d.items():
            d[(lam, gam + z) if side == "l" else (lam, z + gam)] = v
        from .freealg import Coef

        return Coef(self.ring, d)

    def _leg_product(self, u1: str, u2: str, side: str) -> dict:
        """NF(u1 u2) on one leg as dict word -> doubled-ring Coef."""
        memo = self._memo_l if side == "l" else self._memo_r
        key = (u1, u2)
        r = memo.get(key)
        if r is not None:
            return r
        G = self.left if side == "l" else self.right
        if G is None:
            r = {u1 + u2: self.one_c}
        elif not u2:
            r = {u1: self.one_c}
        else:
            vec = G.nf_word(G._to_int(u1)) if u1 else {"": G.one}
            for x in G._to_int(u2):
                vec = G._mul_letter(vec, x)
            r = {G._to_ext(w): self._embed(c, side) for w, c in vec.items()}
        memo[key] = r
        return r

    def reduce_leg(self, w: str, side: str) -> dict:
        return self._leg_product("", w, side)

    # algebra protocol for expr.evaluate
    def letter(self, i: int) -> dict:
        x = letter(i)
        gi = self.base.reduce_gamma(self.grouplikes[i - 1])
        out: dict = {}
        for (u, v), c in (((x, ""), self.one_c), (("", x), self._group_coef(gi, None))):
            for u2, a in self._leg_product("", u, "l").items():
                for v2, b in self._leg_product("", v, "r").items():
                    _acc(out, {(u2, v2): c * a * b})
        return out

    def _group_coef(self, gl, gr):
        rk = self.rank
        z = (0,) * rk
        gl = tuple(gl) if gl is not None else z
        gr = tuple(gr) if gr is not None else z
        return self.ring.monomial(1, None, gl + gr)

    def scalar(self, c) -> dict:
        c = self.ring.scalar(c) if isinstance(c, CycNum) else self.ring.scalar(_frac_to_cyc(c, self.ring.n))
        return {("", ""): c} if c else {}

    def lam(self, name: str) -> dict:
        return {("", ""): self.ring.lam(name)}

    def group(self, gam) -> dict:
        g = self.base.reduce_gamma(tuple(gam))
        return {("", ""): self._group_coef(g, g)}

    def one(self) -> dict:
        return {("", ""): self.one_c}

    def add(self, a: dict, b: dict) -> dict:
        out = dict(a)
        _acc(out, b)
        return out

    def neg(self, a: dict) -> dict:
        return {k: -c for k, c in a.items()}

    def mul(self, a: dict, b: dict) -> dict:
        ring = self.ring
        th = self.theta
        out: dict = {}
        for (u2, v2), c2 in b.items():
            md = word_multidegree(u2, th) + word_multidegree(v2, th)
            twist_needed = any(md)
            for (u1, v1), c1 in a.items():
                c = (ring.twist(c1, md) if twist_needed else c1) * c2
                if not c:
                    continue
                L = self._leg_product(u1, u2, "l")
                if not L:
                    continue
                R = self._leg_product(v1, v2, "r")
                one = self.one_c
                for uu, x in L.items():
                    cx = c if x is one else c * x
                    for vv, y in R.items():
                        key = (uu, vv)
                        t = cx if y is one else cx * y
                        old = out.get(key)
                        if old is None:
                            out[key] = t
                        else:
                            out[key] = old + t
        return {k: c for k, c in out.items() if c}

    def inv_scalar(self, a: dict) -> dict:
        if set(a) != {("", "")}:
            raise ParseError("division by a non-scalar")
        c = a[("", "")]
        if not self.ring.is_scalar(c):
            raise ParseError("division by a non-scalar")
        return {("", ""): self.ring.scalar(c.scalar_part().inv())}

    def chi(self, da, db):
        if self.braiding is None:
            raise ParseError("braided commutator needs a braiding")
        return self.braiding.chi(da, db)

    # helpers
    def pure(self, left: NCPoly | dict, right: NCPoly | dict) -> dict:
        """(left (x) right) with each leg reduced."""
        lt = left.terms if isinstance(left, NCPoly) else left
        rt = right.terms if isinstance(right, NCPoly) else right
        out: dict = {}
        for u, a in lt.items():
            ea = self._embed(a, "l")
            for u2, x in self._leg_product("", u, "l").items():
                ax = ea * x
                for v, b in rt.items():
                    eb = self._embed(b, "r")
                    for v2, y in self._leg_product("", v, "r").items():
                        _acc(out, {(u2, v2): ax * eb * y})
        return out

    def tensor(self, d: dict) -> SmashTensor:
        return SmashTensor(d, self.ring, self.theta)


def _frac_to_cyc(c, n: int) -> CycNum:
    return CycNum.rational(c, n)


def make_tensor_algebra(R: Realization, ring: CoefRing, left=None, right=None) -> TensorAlgebra:
    return TensorAlgebra(R, ring, left, right)


# --------------------------------------------------------------------------
# Hopf structure


def _as_expr(s) -> Expr:
    return s if isinstance(s, Expr) else poly_expr(s)


def hopf_coproduct(s, R: Realization, ring: CoefRing | None = None) -> SmashTensor:
    """Delta with Delta(x_i) = x_i (x) 1 + g_i (x) x_i and Delta(g) = g (x) g."""
    ring = ring or (s.ring if isinstance(s, NCPoly) else R.ring())
    T = make_tensor_algebra(R, ring)
    return T.tensor(evaluate(_as_expr(s), T, R.theta))


def counit(t: SmashTensor, side: str = "left", R: Realization | None = None) -> SmashElem:
    """Apply epsilon (epsilon(x_i) = 0, epsilon(g) = 1) to one leg."""
    base_rank = len(t.ring.group_orders) // 2
    chi_rows = t.ring.chi_exp[:base_rank]
    th = t.theta
    ring = CoefRing(t.ring.n, tuple(tuple(r[:th]) for r in chi_rows), t.ring.group_orders[:base_rank],
                    t.ring.lam_names, t.ring.lam_degrees)
    out: dict = {}
    for u, gl, v, gr, lam, x in t.split_terms():
        if side == "left":
            if u:
                continue
            w, gam = v, gr
        else:
            if v:
                continue
            w, gam = u, gl
        c = ring.monomial(x, lam, gam)
        old = out.get(w)
        out[w] = c if old is None else old + c
    return SmashElem(out, ring, th)


class AntipodeAlgebra:
    """Wraps an algebra so that evaluation computes S(e): S(x_i) = -g_i^{-1} x_i,
    S(gamma) = gamma^{-1}, and products are reversed."""

    def __init__(self, base, grouplikes) -> None:
        self.base = base
        self.grouplikes = grouplikes

    def letter(self, i: int):
        b = self.base
        ginv = tuple(-e for e in self.grouplikes[i - 1])
        return b.neg(b.mul(b.group(ginv), b.letter(i)))

    def group(self, gam):
        return self.base.group(tuple(-e for e in gam))

    def mul(self, a, b):
        return self.base.mul(b, a)

    def __getattr__(self, name):
        return getattr(self.base, name)


def antipode(s, R: Realization, ring: CoefRing | None = None) -> SmashElem:
    from .expr import PolyAlgebra

    ring = ring or (s.ring if isinstance(s, NCPoly) else R.ring())
    base = PolyAlgebra(ring, R.theta, R.braiding)
    return SmashElem.of(evaluate(_as_expr(s), AntipodeAlgebra(base, R.grouplikes), R.theta))


def hopf_ideal_check(gens: list, G, R: Realization, *, report: list | None = None) -> bool:
    """True iff every generator m satisfies (pi (x) pi) Delta(m) = 0 and
    pi(S(m)) = 0, with pi the normal form modulo the complete basis G."""
    from .ncgb import ReducedAlgebra

    if not G.complete:
        raise ValueError("hopf_ideal_check needs a complete Groebner basis")
    T = make_tensor_algebra(R, G.ring, G, G)
    ok = True
    for k, m in enumerate(gens):
        e = _as_expr(m)
        d = evaluate(e, T, R.theta)
        anti = evaluate(e, AntipodeAlgebra(ReducedAlgebra(G, R.braiding), R.grouplikes), R.theta)
        good = not d and not anti
        if report is not None:
            report.append({"generator": k, "coproduct_zero": not d, "antipode_zero": not anti})
        ok = ok and good
    return ok
