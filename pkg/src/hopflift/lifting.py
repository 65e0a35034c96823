"""Deformation of Nichols relations, one stratum at a time.

For a relation r of stratum i two corrections are computed by
undetermined coefficients:

* the cleft side: c with r' = r + c such that the coaction
  rho(y_j) = y_j (x) 1 + g_j (x) x_j satisfies
  rho(r') = r' (x) 1 + g_r (x) r   in  A_i (x) H_i;
* the lifting side: s such that u = r - lambda_r (1 - g_r) + s satisfies
  Delta(u) = u (x) 1 + g_r (x) u   modulo  M_i (x) A + A (x) M_i.

Lambda symbols carry the Z^theta-degree of their relation, so both
equations split into blocks indexed by lambda-monomials.  Block nu only sees
the lambda-free part of the operator plus contributions of already solved
lower blocks, hence each block is a linear system over Q(zeta).

An independent second route recomputes the lifting relation from the
cleft one through the left coaction delta(y_j) = a_j (x) 1 + g_j (x) y_j of
L_i on A_i: delta(r') - g_r (x) r' must have the shape r~ (x) 1.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .bosonization import Realization, TensorAlgebra, hopf_ideal_check
from .braided import BraidingMatrix
from .cyclotomic import CycNum, format_cyc
from .expr import Expr, PolyAlgebra, Scope, evaluate, multideg, parse, poly_expr
from .freealg import Coef, CoefRing, CycField, NCPoly, letter, word_multidegree
from .ncgb import GBasis, NonFlatError, ReducedAlgebra, buchberger

__all__ = [
    "LOCKED",
    "DeformationSolution",
    "InconsistentSystem",
    "LiftingCase",
    "RelationSolution",
    "RelationSpec",
    "Stratum",
    "admissibility",
    "cleft_deform",
    "flatness_check",
    "run_case",
    "solve_lifting",
    "specialize",
    "strata_primitive",
]

LOCKED = "locked-zero"


class InconsistentSystem(ArithmeticError):
    """The ansatz linear system has no solution."""


# --------------------------------------------------------------------------
# cases


@dataclass
class RelationSpec:
    rid: str
    text: str
    expr: Expr
    md: tuple[int, ...]
    stratum: int
    slot: str | None = None  # lambda symbol offered by the case file

    @property
    def degree(self) -> int:
        return sum(self.md)


@dataclass
class Stratum:
    index: int
    relations: list[RelationSpec]


@dataclass
class LiftingCase:
    id: str
    realization: Realization
    strata: list[Stratum]
    lambda_slots: dict[str, str]
    params: dict = field(default_factory=dict)
    expected: dict | None = None
    tag: str = ""
    notes: str = ""
    diagram: dict | None = None  # {"vertices": [...], "edges": {(i, j): CycNum}}

    @property
    def braiding(self) -> BraidingMatrix:
        return self.realization.braiding

    @property
    def theta(self) -> int:
        return self.realization.theta

    @property
    def relations(self) -> list[RelationSpec]:
        return [r for s in self.strata for r in s.relations]

    def relation(self, rid: str) -> RelationSpec:
        for r in self.relations:
            if r.rid == rid:
                return r
        raise KeyError(rid)

    @property
    def active_lambdas(self) -> list[tuple[str, tuple[int, ...]]]:
        out = []
        for r in self.relations:
            s = self.lambda_slots.get(r.rid, LOCKED)
            if s != LOCKED:
                out.append((s, r.md))
        return out

    @property
    def all_slots(self) -> list[str]:
        return [r.slot for r in self.relations if r.slot]

    def ring(self) -> CoefRing:
        lams = self.active_lambdas
        return self.realization.ring([n for n, _ in lams], [d for _, d in lams])

    def scope(self, extra_params: dict | None = None) -> Scope:
        """Parsing scope: case parameters, active lambdas as symbols and
        inactive lambda slots as the number 0."""
        params = dict(self.params)
        active = {n for n, _ in self.active_lambdas}
        for s in self.all_slots:
            if s not in active:
                params[s] = CycNum.rational(0, self.realization.n)
        if extra_params:
            params.update(extra_params)
        return Scope(self.theta, params, tuple(sorted(active)), True)

    @classmethod
    def build(
        cls,
        id: str,
        realization: Realization,
        strata: list[list[tuple[str, str, str | None]]],
        params: dict | None = None,
        expected: dict | None = None,
        tag: str = "",
        notes: str = "",
        diagram: dict | None = None,
    ) -> LiftingCase:
        params = dict(params or {})
        th = realization.theta
        scope = Scope(th, params, (), allow_groups=False)
        out = []
        for i, rels in enumerate(strata):
            specs = []
            for rid, text, slot in rels:
                e = parse(text, scope)
                md = multideg(e, th)
                if md is None:
                    raise ValueError(f"relation {rid} ({text}) is not homogeneous")
                specs.append(RelationSpec(rid, text, e, md, i, slot))
            out.append(Stratum(i, specs))
        case = cls(id, realization, out, {}, params, expected, tag, notes, diagram)
        for r in case.relations:
            case.lambda_slots[r.rid] = _slot_status(realization, r)[0]
        return case


def _slot_status(R: Realization, r: RelationSpec) -> tuple[str, str]:
    if not r.slot:
        return LOCKED, "no parameter slot"
    if not R.chi_trivial(r.md):
        return LOCKED, "chi_r != epsilon"
    if R.is_identity(R.g_of(r.md)):
        return LOCKED, "g_r = 1"
    return r.slot, "admissible"


# --------------------------------------------------------------------------
# admissibility


def admissibility(case: LiftingCase) -> dict:
    """Which lambda_r may be nonzero, for the case's realization and, for
    theta = 2, for every split q12 * q21 of the edge label."""
    R = case.realization
    B = case.braiding
    rows = []
    for r in case.relations:
        status, reason = _slot_status(R, r)
        conds = []
        for i in range(B.theta):
            factors = [f"q{i + 1}{j + 1}^{a}" if a != 1 else f"q{i + 1}{j + 1}" for j, a in enumerate(r.md) if a]
            conds.append("*".join(factors) + " = 1")
        rows.append({
            "relation": r.rid,
            "text": r.text,
            "degree": list(r.md),
            "slot": r.slot,
            "status": status,
            "reason": reason,
            "condition": conds,
        })
    active = [n for n, _ in case.active_lambdas]
    out = {"relations": rows, "active": active, "joint": [list(p) for p in itertools.combinations(active, 2)]}
    if B.theta == 2:
        out["scan"] = _scan_splits(case)
    return out


def _scan_splits(case: LiftingCase) -> dict:
    """For theta = 2 and the standard realization: the values of q12 (with
    q21 = edge / q12) for which each slot, and each pair of slots, is
    admissible."""
    B = case.braiding
    n = B.n
    e11, e22 = B.exp[0][0], B.exp[1][1]
    edge = (B.exp[0][1] + B.exp[1][0]) % n
    rels = [r for r in case.relations if r.slot]
    K = n
    for r in rels:
        for a in r.md:
            if a:
                K = _lcm(K, n * a)
    s = K // n
    allowed: dict[str, set[int]] = {}
    for r in rels:
        a1, a2 = r.md
        ok = set()
        for t in range(K):
            # q12 = zeta_K^t, q21 = edge / q12
            c1 = (e11 * s * a1 + t * a2) % K
            c2 = ((edge * s - t) * a1 + e22 * s * a2) % K
            if c1 == 0 and c2 == 0 and (a1 or a2):
                ok.add(t)
        allowed[r.slot] = ok

    def fmt(ts):
        return [root_name(Fraction(t, K)) for t in sorted(ts)]

    singles = {k: fmt(v) for k, v in allowed.items()}
    pairs = {}
    for a, b in itertools.combinations([r.slot for r in rels], 2):
        pairs[f"{a}*{b}"] = fmt(allowed[a] & allowed[b])
    return {"q12_values": singles, "pairs": pairs, "K": K, "_sets": {k: sorted(v) for k, v in allowed.items()}}


def root_name(t: Fraction) -> str:
    """exp(2 pi i t) as ``1``, ``-1`` or ``z<d>^<k>``."""
    t = Fraction(t) % 1
    if t == 0:
        return "1"
    if t == Fraction(1, 2):
        return "-1"
    return f"z{t.denominator}^{t.numerator}"


def _lcm(a: int, b: int) -> int:
    from math import gcd

    return a * b // gcd(a, b)


def scan_allows(scan: dict, slot: str, q12: CycNum) -> bool:
    """Does the scan allow ``slot`` at the given value of q12?"""
    from .cyclotomic import root_log

    t = root_log(q12)
    K = scan["K"]
    if t is None or (t * K).denominator != 1:
        return False
    return int(t * K) % K in scan["_sets"][slot]


# --------------------------------------------------------------------------
# sparse exact linear algebra


def _zero(n: int) -> CycNum:
    return CycNum.rational(0, n)


def solve_sparse(columns: list[dict], rhs: dict, n: int):
    """Solve sum_j x_j columns[j] = rhs exactly.

    Pivots are taken at the smallest column index, so columns listed last
    are the first to be left free (and set to 0).  Returns (x, rank) or
    raises InconsistentSystem.
    """
    rows: dict = {}
    for j, col in enumerate(columns):
        for key, v in col.items():
            rows.setdefault(key, {})[j] = v
    for key in rhs:
        rows.setdefault(key, {})
    pivots: dict[int, tuple[dict, CycNum]] = {}
    zero = _zero(n)
    for key, r0 in rows.items():
        r = dict(r0)
        b = rhs.get(key, zero)
        while True:
            if not r:
                if not b.is_zero():
                    raise InconsistentSystem(f"equation {key!r} cannot be satisfied")
                break
            c = min(r)
            hit = pivots.get(c)
            if hit is None:
                inv = r[c].inv()
                pivots[c] = ({k: v * inv for k, v in r.items()}, b * inv)
                break
            p, pb = hit
            f = r[c]
            for k, v in p.items():
                w = r.get(k)
                w = -(f * v) if w is None else w - f * v
                if w.is_zero():
                    r.pop(k, None)
                else:
                    r[k] = w
            b = b - f * pb
    x: dict[int, CycNum] = {}
    for c in sorted(pivots, reverse=True):
        p, pb = pivots[c]
        val = pb
        for k, v in p.items():
            if k != c and k in x:
                val = val - v * x[k]
        if not val.is_zero():
            x[c] = val
    return x, len(pivots)


# --------------------------------------------------------------------------
# helpers


def _split_blocks(T: TensorAlgebra, d: dict) -> dict:
    """Tensor dict -> {lambda exponents: {(u, v, gamma pair): scalar}}."""
    out: dict = {}
    for (u, v), c in d.items():
        for (lam, gam), x in c.d.items():
            out.setdefault(lam, {})[(u, v, gam)] = x
    return out


def _leg_nf(e: Expr, G: GBasis | None, ring, R: Realization) -> dict:
    """Normal form of an expression modulo G (or expanded if G is None),
    as dict external word -> Coef."""
    if G is None:
        return evaluate(e, PolyAlgebra(ring, R.theta, R.braiding), R.theta).terms
    d = evaluate(e, ReducedAlgebra(G, R.braiding), R.theta)
    return {G._to_ext(w): c for w, c in d.items()}


def _words_of(G: GBasis | None, md: tuple[int, ...], theta: int) -> list[str]:
    L = sum(md)
    if G is None:
        base = "".join(letter(i + 1) * a for i, a in enumerate(md))
        return sorted({"".join(p) for p in itertools.permutations(base)})
    if L >= len(G.normal_by_deg):
        if not G.complete and L > G.degree_bound:
            raise ValueError("ansatz degree beyond the truncation bound")
        return []
    return [G._to_ext(w) for w in G.normal_by_deg[L] if word_multidegree(G._to_ext(w), theta) == tuple(md)]


def _lam_monomials(lams: list[tuple[int, ...]], target: tuple[int, ...]) -> list[tuple[int, ...]]:
    out = []

    def rec(k, cur, used):
        if k == len(lams):
            out.append(tuple(cur))
            return
        e = 0
        while True:
            tot = tuple(u + e * a for u, a in zip(used, lams[k]))
            if any(t > m for t, m in zip(tot, target)):
                break
            rec(k + 1, cur + [e], tot)
            if not any(lams[k]):
                break
            e += 1

    rec(0, [], tuple(0 for _ in target))
    return out


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _le(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _gam_choices(R: Realization, nu: tuple[int, ...], lam_gs: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """prod g_{r_k}^{e_k} with 0 <= e_k <= nu_k."""
    out = set()
    for es in itertools.product(*[range(k + 1) for k in nu]):
        g = [0] * R.rank
        for e, gk in zip(es, lam_gs):
            for t, x in enumerate(gk):
                g[t] += e * x
        out.add(R.reduce(g))
    return sorted(out, key=lambda g: (-sum(abs(x) for x in g), g))


# --------------------------------------------------------------------------
# solution records


@dataclass
class RelationSolution:
    rid: str
    stratum: int
    lam: str | None
    g_r: tuple[int, ...]
    cleft_correction: NCPoly  # c, with r' = r + c
    lifting_correction: NCPoly  # s, with u = r - lambda_r (1 - g_r) + s
    cleft_relation: Expr  # r' - lambda_r
    lifting_relation: Expr  # u
    primitive: bool
    route_agree: bool | None
    stats: dict = field(default_factory=dict)


@dataclass
class DeformationSolution:
    case_id: str
    relations: dict[str, RelationSolution] = field(default_factory=dict)
    constraints: list[str] = field(default_factory=list)


# --------------------------------------------------------------------------
# the solver


class LiftingSolver:
    def __init__(self, case: LiftingCase, *, trace=None, route2: bool = True, values: dict | None = None) -> None:
        """``values`` fixes every active lambda to a number before solving
        (one linear system per relation instead of lambda blocks)."""
        self.case = case
        self.R = case.realization
        self.values = None
        if values is not None:
            self.values = {k: (v if isinstance(v, CycNum) else CycNum.rational(v, self.R.n))
                           for k, v in values.items()}
        self.ring = case.ring() if values is None else self.R.ring()
        self.trace = trace
        self.route2 = route2
        self.solution = DeformationSolution(case.id)
        lams = case.active_lambdas
        self.lam_names = [n for n, _ in lams]
        self.lam_md = {n: md for n, md in lams}
        self.done: set[int] = set()
        self._gb_cache: dict = {}

    def log(self, msg: str) -> None:
        if self.trace:
            self.trace(msg)

    # ideals of earlier strata
    def _gb(self, kind: str, i: int, bound: int):
        key = (kind, i, bound)
        if key in self._gb_cache:
            return self._gb_cache[key]
        gens = []
        for st in self.case.strata[:i]:
            for r in st.relations:
                if kind == "nichols":
                    gens.append(r.expr)
                elif kind == "cleft":
                    gens.append(self.solution.relations[r.rid].cleft_relation)
                else:
                    gens.append(self.solution.relations[r.rid].lifting_relation)
        G = None
        if gens:
            G = buchberger(gens, bound=bound, ring=self.ring, theta=self.R.theta, braiding=self.R.braiding)
        self._gb_cache[key] = G
        return G

    def solve_stratum(self, i: int) -> list[RelationSolution]:
        for j in range(i):
            if j not in self.done:
                self.solve_stratum(j)
        if i in self.done:
            return [self.solution.relations[r.rid] for r in self.case.strata[i].relations]
        st = self.case.strata[i]
        bound = max(r.degree for r in st.relations)
        t0 = time.perf_counter()
        N = self._gb("nichols", i, bound)
        E = self._gb("cleft", i, bound)
        M = self._gb("lifting", i, bound)
        self.log(f"stratum {i}: ideals ready in {time.perf_counter() - t0:.2f}s")
        # lambdas of earlier strata
        prev = [self.case.lambda_slots[r.rid] for s in self.case.strata[:i] for r in s.relations]
        prev = [p for p in prev if p != LOCKED]
        out = []
        for r in st.relations:
            out.append(self._solve_relation(r, N, E, M, prev))
        self.done.add(i)
        return out

    def _solve_relation(self, r: RelationSpec, N, E, M, prev: list[str]) -> RelationSolution:
        R = self.R
        ring = self.ring
        n = ring.n
        lam = self.case.lambda_slots.get(r.rid, LOCKED)
        lam = None if lam == LOCKED else lam
        g_r = R.g_of(r.md)
        idx = [self.lam_names.index(p) for p in prev]
        lam_mds = [self.lam_md[p] for p in prev]
        lam_gs = [R.g_of(md) for md in lam_mds]
        nus = _lam_monomials(lam_mds, r.md)
        full = lambda nu: tuple(  # noqa: E731
            dict(zip(idx, nu)).get(k, 0) for k in range(len(self.lam_names))
        )
        lam_value = None
        if self.values is not None:
            lam_value = self.values[lam] if lam is not None else None
            # numbers instead of symbols: all lambda blocks form one system
            all_nus = nus
            nus = [()]
            full = lambda nu: ()  # noqa: E731
        stats: dict = {}
        t0 = time.perf_counter()

        # ---- cleft side
        Tc = TensorAlgebra(R, ring, E, N)
        rE = _leg_nf(r.expr, E, ring, R)
        rN = _leg_nf(r.expr, N, ring, R)
        one = {"": ring.one}
        D = Tc.add(evaluate(r.expr, Tc, R.theta), Tc.neg(Tc.add(Tc.pure(rE, one), Tc.pure({"": ring.group(g_r)}, rN))))
        target = {k: {kk: -v for kk, v in blk.items()} for k, blk in _split_blocks(Tc, D).items()}
        rho_cache = {"": Tc.one()}

        def rho(w):
            v = rho_cache.get(w)
            if v is None:
                v = Tc.mul(rho(w[:-1]), Tc.letter(ord(w[-1]) - 96))
                rho_cache[w] = v
            return v

        def cleft_image(key):
            w, _g = key
            return _split_blocks(Tc, Tc.add(rho(w), Tc.neg(Tc.pure({w: ring.one}, one))))

        def cleft_columns(nu):
            md = _sub(r.md, _nu_degree(nu, lam_mds, len(r.md)))
            if any(x < 0 for x in md) or sum(md) >= r.degree:
                return []
            ws = _words_of(E, md, R.theta)
            return [(w, R.reduce((0,) * R.rank)) for w in sorted(ws, key=lambda w: (-len(w), w))]

        if self.values is not None:
            cleft_columns = _merged(cleft_columns, all_nus)
        coeffs, st_c = self._graded_solve(nus, full, cleft_columns, cleft_image, target, n)
        stats["cleft"] = st_c
        c_terms: dict = {}
        for ((w, _g), nu), v in coeffs.items():
            cf = ring.monomial(v, full(nu), None)
            c_terms[w] = c_terms.get(w, ring.scalar(0)) + cf
        c = NCPoly(c_terms, ring, R.theta)
        r_prime = r.expr if c.is_zero() else Expr("add", (r.expr, poly_expr(c)))
        lam_e = Expr("lam", (lam,)) if lam_value is None else Expr("num", (lam_value,))
        cleft_rel = r_prime if lam is None else Expr("add", (r_prime, Expr("neg", (lam_e,))))

        # ---- lifting side
        Tl = TensorAlgebra(R, ring, M, M)
        rM = _leg_nf(r.expr, M, ring, R)
        D = Tl.add(evaluate(r.expr, Tl, R.theta), Tl.neg(Tl.add(Tl.pure(rM, one), Tl.pure({"": ring.group(g_r)}, rM))))
        target = _split_blocks(Tl, D)
        primitive = not target.get(ring.e_lam)
        delta_cache = {"": Tl.one()}

        def delta(w):
            v = delta_cache.get(w)
            if v is None:
                v = Tl.mul(delta(w[:-1]), Tl.letter(ord(w[-1]) - 96))
                delta_cache[w] = v
            return v

        def lift_image(key):
            w, g = key
            d = Tl.mul(delta(w), Tl.group(g))
            wg = {w: ring.group(g)}
            d = Tl.add(d, Tl.neg(Tl.add(Tl.pure(wg, one), Tl.pure({"": ring.group(g_r)}, wg))))
            return _split_blocks(Tl, d)

        def lift_columns(nu):
            md = _sub(r.md, _nu_degree(nu, lam_mds, len(r.md)))
            if any(x < 0 for x in md) or sum(md) >= r.degree:
                return []
            if not R.same_character(md, r.md):
                return []
            ws = sorted(_words_of(M, md, R.theta), key=lambda w: (-len(w), w))
            gs = _gam_choices(R, nu, lam_gs)
            return [(w, g) for w in ws for g in gs]

        if self.values is not None:
            lift_columns = _merged(lift_columns, all_nus)
        coeffs, st_l = self._graded_solve(nus, full, lift_columns, lift_image, target, n)
        stats["lifting"] = st_l
        s_terms: dict = {}
        for ((w, g), nu), v in coeffs.items():
            cf = ring.monomial(-v, full(nu), g)
            s_terms[w] = s_terms.get(w, ring.scalar(0)) + cf
        s = NCPoly(s_terms, ring, R.theta)
        parts = [r.expr]
        if lam is not None:
            one_minus_g = Expr("add", (Expr("num", (Fraction(1),)), Expr("neg", (Expr("g", (g_r,)),))))
            parts.append(Expr("neg", (Expr("mul", (lam_e, one_minus_g)),)))
        if not s.is_zero():
            parts.append(poly_expr(s))
        lift_rel = parts[0] if len(parts) == 1 else Expr("add", tuple(parts))

        # ---- second route: left coaction of L_i on A_i
        agree = None
        if self.route2:
            agree = self._route2(r, r_prime, g_r, s, M, E)
        stats["seconds"] = round(time.perf_counter() - t0, 3)
        sol = RelationSolution(r.rid, r.stratum, lam, g_r, c, s, cleft_rel, lift_rel, primitive, agree, stats)
        self.solution.relations[r.rid] = sol
        self.log(f"relation {r.rid}: cleft {len(c.terms)} terms, lifting {len(s.terms)} terms, "
                 f"route2={agree}, {stats['seconds']}s")
        return sol

    def _route2(self, r, r_prime: Expr, g_r, s: NCPoly, M, E) -> bool:
        R = self.R
        ring = self.ring
        T = TensorAlgebra(R, ring, M, E)
        rpE = _leg_nf(r_prime, E, ring, R)
        X = T.add(evaluate(r_prime, T, R.theta), T.neg(T.pure({"": ring.group(g_r)}, rpE)))
        rk = R.rank
        tilde: dict = {}
        for (u, v), cf in X.items():
            if v:
                return False
            for (lam, gam), x in cf.d.items():
                if any(gam[rk:]):
                    return False
                m = ring.monomial(x, lam, gam[:rk])
                tilde[u] = tilde.get(u, ring.scalar(0)) + m
        # r~ must equal r + s modulo M
        diff = Expr("add", (r.expr, poly_expr(s), Expr("neg", (poly_expr(NCPoly(tilde, ring, R.theta)),))))
        return not _leg_nf(diff, M, ring, R)

    def _graded_solve(self, nus, full, columns_for, image_of, target: dict, n: int):
        """Block-triangular solve over lambda-monomials."""
        zero = self.ring.e_lam
        cache: dict = {}

        def img(key):
            v = cache.get(key)
            if v is None:
                v = cache[key] = image_of(key)
            return v

        blocks = sorted({full(nu) for nu in nus} | set(target), key=lambda m: (sum(m), m))
        by_full = {full(nu): nu for nu in nus}
        solved: dict = {}
        stats = {"blocks": 0, "unknowns": 0, "free": 0}
        for F in blocks:
            rhs = dict(target.get(F, {}))
            for (key, mu), v in solved.items():
                Fm = full(mu)
                if Fm == F or not _le(Fm, F):
                    continue
                part = img(key).get(_sub(F, Fm))
                if part:
                    for k2, x in part.items():
                        y = rhs.get(k2)
                        y = -(v * x) if y is None else y - v * x
                        if y.is_zero():
                            rhs.pop(k2, None)
                        else:
                            rhs[k2] = y
            nu = by_full.get(F)
            cols = columns_for(nu) if nu is not None else []
            if not cols:
                if rhs:
                    raise InconsistentSystem(f"lambda block {F}: nonzero obstruction and no ansatz terms")
                continue
            mats = [img(k).get(zero, {}) for k in cols]
            x, rank = solve_sparse(mats, rhs, n)
            stats["blocks"] += 1
            stats["unknowns"] += len(cols)
            stats["free"] += len(cols) - rank
            for j, v in x.items():
                solved[(cols[j], nu)] = v
        return solved, stats

    def run(self) -> DeformationSolution:
        for i in range(len(self.case.strata)):
            self.solve_stratum(i)
        return self.solution


def _merged(columns_for, nus):
    """Columns of every lambda block, without repeats, for a single system."""
    def cols(_nu):
        out, seen = [], set()
        for nu in nus:
            for k in columns_for(nu):
                if k not in seen:
                    seen.add(k)
                    out.append(k)
        return sorted(out, key=lambda k: (-len(k[0]), k[0], tuple(-abs(e) for e in k[1]), k[1]))
    return cols


def _nu_degree(nu, lam_mds, th) -> tuple[int, ...]:
    tot = [0] * th
    for e, md in zip(nu, lam_mds):
        for k, a in enumerate(md):
            tot[k] += e * a
    return tuple(tot)


def cleft_deform(case: LiftingCase, i: int, solver: LiftingSolver | None = None) -> list[dict]:
    """Cleft relations r' - lambda_r of stratum i."""
    solver = solver or LiftingSolver(case)
    out = []
    for sol in solver.solve_stratum(i):
        out.append({
            "relation": sol.rid,
            "correction": str(sol.cleft_correction) if not sol.cleft_correction.is_zero() else "0",
            "status": "correction found" if not sol.cleft_correction.is_zero() else "no correction needed",
            "cleft_relation": str(sol.cleft_relation),
        })
    return out


def solve_lifting(case: LiftingCase, i: int, solver: LiftingSolver | None = None) -> list[RelationSolution]:
    solver = solver or LiftingSolver(case)
    return solver.solve_stratum(i)


# --------------------------------------------------------------------------
# specialization and verification


def specialize(e: Expr, values: dict, ring) -> Expr:
    """Substitute numbers for lambda symbols; embedded polynomials are moved
    to ``ring`` (a CycField or a lambda-free CoefRing)."""
    op = e.op
    if op == "lam":
        v = values.get(e.args[0])
        if v is None:
            raise KeyError(f"no value for {e.args[0]}")
        return Expr("num", (v,))
    if op == "poly":
        return poly_expr(_specialize_poly(e.args[0], values, ring))
    if op in ("x", "num", "g"):
        return e
    if op == "pow":
        return Expr("pow", (specialize(e.args[0], values, ring), e.args[1]))
    return Expr(op, tuple(specialize(a, values, ring) for a in e.args))


def _specialize_poly(p: NCPoly, values: dict, ring) -> NCPoly:
    vals = {k: (v if isinstance(v, CycNum) else CycNum.rational(v, p.ring.n)) for k, v in values.items()}
    out = {}
    for w, c in p.terms.items():
        c2 = c.specialize(vals)
        if isinstance(ring, CycField):
            if any(any(g) for (_l, g) in c2.d):
                raise ValueError("group element in a field specialization")
            x = c2.scalar_part()
            out[w] = ring.scalar(x)
        else:
            d = {}
            for (_lam, gam), x in c2.d.items():
                key = (ring.e_lam, gam)
                d[key] = d[key] + x if key in d else x
            out[w] = Coef(ring, {k: v for k, v in d.items() if not v.is_zero()})
    return NCPoly(out, ring, p.theta)


def flatness_check(relations: list[Expr], reference: GBasis, ring, theta: int, braiding, *, order=None) -> dict:
    """Dimension and leading-word comparison against a complete reference
    basis (the undeformed ideal)."""
    if not reference.complete:
        raise ValueError("reference basis is incomplete")
    try:
        G = buchberger(relations, ring=ring, theta=theta, braiding=braiding, order=order)
    except NonFlatError as exc:
        return {"flat": False, "reason": f"non-flat: {exc}"}
    if not G.complete:
        return {"flat": False, "reason": f"incomplete at bound {G.degree_bound}", "basis": G}
    dim, ref = G.dimension(), reference.dimension()
    same = G.leading_words() == reference.leading_words()
    return {"flat": dim == ref and same, "dimension": dim, "reference_dimension": ref,
            "leading_words_equal": same, "hilbert": G.hilbert(), "basis": G}


def lambda_specializations(names: list[str], count: int = 5, seed: int = 0) -> list[dict]:
    """Patterns all-ones and alternating 1/0, then seeded random rationals."""
    out = []
    if count >= 1:
        out.append({k: Fraction(1) for k in names})
    alt = {k: Fraction(1 if j % 2 == 0 else 0) for j, k in enumerate(names)}
    if count >= 2 and alt not in out:
        out.append(alt)
    rng = random.Random(seed)
    while len(out) < count:
        vals = {}
        for k in names:
            num = rng.choice([-5, -4, -3, -2, -1, 1, 2, 3, 4, 5])
            den = rng.choice([1, 1, 2, 3])
            vals[k] = Fraction(num, den)
        if vals not in out:
            out.append(vals)
    return out


def run_case(case: LiftingCase, *, seeds: int = 5, seed: int = 0, trace=None, verify: bool = True,
             values: list[dict] | None = None) -> dict:
    """Full pipeline: admissibility, cleft and lifting relations, both
    routes, golden comparison, flatness and Hopf-ideal checks."""
    from .report import solution_json, compare_expected

    t0 = time.perf_counter()
    R = case.realization
    report: dict = {
        "schema": 1,
        "case": case.id,
        "realization_tag": case.tag,
        "realization": R.to_json(),
        "braiding": [[format_cyc(x) for x in row] for row in case.braiding.matrix()],
        "seed": seed,
    }
    report["admissibility"] = admissibility(case)
    report["admissibility"].get("scan", {}).pop("_sets", None)
    if not case.relations:
        report.update({"relations": [], "checks": {}, "passed": True})
        return report
    solver = LiftingSolver(case, trace=trace)
    solution = solver.run()
    report["relations"] = solution_json(case, solution)
    checks: dict = {}
    checks["primitive"] = all(s.primitive for s in solution.relations.values())
    checks["route_agreement"] = all(s.route_agree is not False for s in solution.relations.values())
    if case.expected:
        cmp = compare_expected(case, solver)
        report["golden"] = cmp
        checks["golden"] = all(x["match"] for x in cmp)
    if verify:
        ref = nichols_basis(case)
        report["nichols"] = {"dimension": ref.dimension(), "hilbert": ref.hilbert(), "complete": ref.complete}
        ver = verify_specializations(case, solver, seeds=seeds, seed=seed, trace=trace, reference=ref,
                                     values=values)
        report["specializations"] = ver
        checks["flat_cleft"] = all(v["cleft"]["flat"] for v in ver)
        checks["flat_lifting"] = all(v["lifting"]["flat"] for v in ver)
        checks["hopf_ideal"] = all(v["hopf_ideal"] for v in ver)
    report["checks"] = checks
    report["passed"] = all(checks.values())
    report["timing_seconds"] = round(time.perf_counter() - t0, 2)
    return report


def strata_primitive(case: LiftingCase) -> dict[str, bool]:
    """For each relation r: is r skew-primitive, Delta(r) = r (x) 1 + g_r (x) r,
    modulo the ideal of the earlier strata in both legs of the bosonization?"""
    R = case.realization
    ring = R.ring()
    out = {}
    earlier: list[Expr] = []
    for st in case.strata:
        G = None
        if earlier:
            # legs never exceed the stratum degree, so a truncated basis suffices
            bound = max(r.degree for r in st.relations)
            G = buchberger(earlier, bound=bound, ring=ring, theta=R.theta, braiding=R.braiding)
        T = TensorAlgebra(R, ring, G, G)
        one = {"": ring.one}
        for r in st.relations:
            rG = _leg_nf(r.expr, G, ring, R)
            D = T.add(evaluate(r.expr, T, R.theta),
                      T.neg(T.add(T.pure(rG, one), T.pure({"": ring.group(R.g_of(r.md))}, rG))))
            out[r.rid] = not D
        earlier += [r.expr for r in st.relations]
    return out


def nichols_basis(case: LiftingCase, ring=None) -> GBasis:
    R = case.realization
    ring = ring or CycField(R.n)
    return buchberger([r.expr for r in case.relations], ring=ring, theta=R.theta, braiding=R.braiding)


def verify_specializations(case: LiftingCase, solver: LiftingSolver, *, seeds: int = 5, seed: int = 0,
                           trace=None, reference: GBasis | None = None, values: list[dict] | None = None) -> list[dict]:
    R = case.realization
    field_ring = CycField(R.n)
    smash_ring = R.ring()
    ref = reference or nichols_basis(case, field_ring)
    names = [n for n, _ in case.active_lambdas]
    out = []
    for vals in values or lambda_specializations(names, seeds, seed):
        entry: dict = {"lambda": {k: str(v) for k, v in vals.items()}}
        sols = [solver.solution.relations[r.rid] for r in case.relations]
        cleft = [specialize(s.cleft_relation, vals, field_ring) for s in sols]
        lift = [specialize(s.lifting_relation, vals, smash_ring) for s in sols]
        fc = flatness_check(cleft, ref, field_ring, R.theta, R.braiding)
        fc.pop("basis", None)
        entry["cleft"] = fc
        fl = flatness_check(lift, ref, smash_ring, R.theta, R.braiding)
        G = fl.pop("basis", None)
        entry["lifting"] = fl
        entry["hopf_ideal"] = bool(G is not None and G.complete and hopf_ideal_check(lift, G, R))
        if trace:
            trace(f"specialization {entry['lambda']}: cleft flat={fc['flat']}, "
                  f"lifting flat={fl['flat']}, hopf={entry['hopf_ideal']}")
        out.append(entry)
    return out
