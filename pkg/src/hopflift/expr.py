"""Expression syntax for relations in case files.

Grammar (whitespace ignored)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' integer)?
    atom   := number | name | name '(' expr ',' expr ')' | '(' expr ')'

Names:

* ``x1``, ``x2`` letters; ``x12``, ``x112``, ``x221``, ... root vectors
  (standard Lyndon bracketing, see ``braided.root_vector``).  The prefixes
  ``y`` and ``a`` are accepted as synonyms of ``x``.
* ``br(u, v)`` braided commutator [u, v]_c.
* ``g1``, ``g2`` group generators; ``g112`` means g1^2 g2.
* ``z<n>`` a primitive n-th root of unity exp(2 pi i / n).
* case parameters (``zeta``, ``q``, ``q12``, ...) and lambda symbols
  (``l1``, ``l2``, ``l112``, ...) as declared by the caller.

Expressions are kept as trees so that they can be evaluated in any algebra:
the free algebra, a quotient that reduces after every product, or a tensor
square carrying a coproduct.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .braided import lyndon_split
from .cyclotomic import CycNum, make_root
from .freealg import NCPoly

__all__ = ["Expr", "ParseError", "Scope", "evaluate", "parse", "poly_expr", "to_poly"]


class ParseError(ValueError):
    pass


@dataclass(frozen=True)
class Expr:
    op: str
    args: tuple = ()

    def __str__(self) -> str:
        return to_text(self)


@dataclass
class Scope:
    """What names mean while parsing."""

    theta: int = 2
    params: dict | None = None  # name -> CycNum
    lams: tuple[str, ...] = ()
    allow_groups: bool = True

    def param(self, name: str):
        return (self.params or {}).get(name)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot tokenize near {text[pos:pos + 10]!r}")
        num, name, sym = m.groups()
        if num is not None:
            toks.append(("num", num))
        elif name is not None:
            toks.append(("name", name))
        elif sym is not None:
            toks.append(("sym", sym))
        pos = m.end()
    toks.append(("end", ""))
    return toks


class _Parser:
    def __init__(self, text: str, scope: Scope) -> None:
        self.toks = _tokenize(text)
        self.i = 0
        self.scope = scope
        self.text = text

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, sym: str) -> None:
        t = self.take()
        if t != ("sym", sym):
            raise ParseError(f"expected {sym!r} but found {t[1]!r} in {self.text!r}")

    def parse(self) -> Expr:
        e = self.expr()
        if self.peek()[0] != "end":
            raise ParseError(f"unexpected {self.peek()[1]!r} in {self.text!r}")
        return e

    def expr(self) -> Expr:
        terms = [self.term()]
        while self.peek() in (("sym", "+"), ("sym", "-")):
            op = self.take()[1]
            t = self.term()
            terms.append(t if op == "+" else Expr("neg", (t,)))
        return terms[0] if len(terms) == 1 else Expr("add", tuple(terms))

    def term(self) -> Expr:
        factors = [self.unary()]
        while self.peek() in (("sym", "*"), ("sym", "/")):
            op = self.take()[1]
            f = self.unary()
            factors.append(f if op == "*" else Expr("inv", (f,)))
        return factors[0] if len(factors) == 1 else Expr("mul", tuple(factors))

    def unary(self) -> Expr:
        if self.peek() == ("sym", "-"):
            self.take()
            return Expr("neg", (self.unary(),))
        if self.peek() == ("sym", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek() == ("sym", "^"):
            self.take()
            sign = 1
            if self.peek() == ("sym", "-"):
                self.take()
                sign = -1
            elif self.peek() == ("sym", "("):
                # allow ^(-3)
                self.take()
                if self.peek() == ("sym", "-"):
                    self.take()
                    sign = -1
                t = self.take()
                self.expect(")")
                if t[0] != "num":
                    raise ParseError("exponent must be an integer")
                return _pow(base, sign * int(t[1]))
            t = self.take()
            if t[0] != "num":
                raise ParseError("exponent must be an integer")
            return _pow(base, sign * int(t[1]))
        return base

    def atom(self) -> Expr:
        kind, val = self.take()
        if kind == "num":
            return Expr("num", (Fraction(int(val)),))
        if kind == "sym" and val == "(":
            e = self.expr()
            self.expect(")")
            return e
        if kind != "name":
            raise ParseError(f"unexpected {val!r} in {self.text!r}")
        if self.peek() == ("sym", "("):
            if val != "br":
                raise ParseError(f"unknown function {val!r}")
            self.take()
            u = self.expr()
            self.expect(",")
            v = self.expr()
            self.expect(")")
            return Expr("br", (u, v))
        return self.name(val)

    def name(self, val: str) -> Expr:
        sc = self.scope
        p = sc.param(val)
        if p is not None:
            return Expr("num", (p,))
        if val in sc.lams:
            return Expr("lam", (val,))
        m = re.fullmatch(r"z(\d+)", val)
        if m:
            return Expr("num", (make_root(int(m.group(1)), 1),))
        m = re.fullmatch(r"[xya](\d+)", val)
        if m:
            digits = m.group(1)
            if any(not 1 <= int(ch) <= sc.theta for ch in digits):
                raise ParseError(f"letter index out of range in {val!r}")
            return Expr("x", (digits,))
        m = re.fullmatch(r"g(\d+)", val)
        if m and sc.allow_groups:
            gam = [0] * sc.theta
            for ch in m.group(1):
                k = int(ch)
                if not 1 <= k <= sc.theta:
                    raise ParseError(f"group index out of range in {val!r}")
                gam[k - 1] += 1
            return Expr("g", (tuple(gam),))
        raise ParseError(f"unknown name {val!r}")


def _pow(base: Expr, k: int) -> Expr:
    # fold powers of roots of unity so that printed scalars parse back unchanged
    if base.op == "num" and isinstance(base.args[0], CycNum) and not base.args[0].is_zero():
        return Expr("num", (base.args[0] ** k,))
    return Expr("pow", (base, k))


def parse(text: str, scope: Scope | None = None) -> Expr:
    return _Parser(text, scope or Scope()).parse()


# --------------------------------------------------------------------------
# degree bookkeeping


def multideg(e: Expr, theta: int):
    """Multidegree of the x-part of e; None when inhomogeneous.

    Scalars, lambda symbols and group elements have degree zero here.
    """
    op = e.op
    if op == "x":
        md = [0] * theta
        for ch in e.args[0]:
            md[int(ch) - 1] += 1
        return tuple(md)
    if op in ("num", "lam", "g"):
        return (0,) * theta
    if op == "poly":
        md = e.args[0].multidegree()
        return None if md == "inhomogeneous" else md
    if op == "neg":
        return multideg(e.args[0], theta)
    if op == "inv":
        d = multideg(e.args[0], theta)
        if d is None or any(d):
            raise ParseError("division by a non-scalar")
        return d
    if op == "pow":
        d = multideg(e.args[0], theta)
        if d is None:
            return None
        return tuple(e.args[1] * a for a in d)
    if op in ("mul", "br"):
        tot = (0,) * theta
        for a in e.args:
            d = multideg(a, theta)
            if d is None:
                return None
            tot = tuple(x + y for x, y in zip(tot, d))
        return tot
    if op == "add":
        ds = {multideg(a, theta) for a in e.args}
        return ds.pop() if len(ds) == 1 else None
    raise ValueError(op)


def max_degree(e: Expr) -> int:
    """Largest total x-degree of a term (an upper bound)."""
    op = e.op
    if op == "x":
        return len(e.args[0])
    if op in ("num", "lam", "g"):
        return 0
    if op == "poly":
        return max(0, e.args[0].degree())
    if op in ("neg", "inv"):
        return max_degree(e.args[0])
    if op == "pow":
        return max(0, e.args[1]) * max_degree(e.args[0])
    if op in ("mul", "br"):
        return sum(max_degree(a) for a in e.args)
    if op == "add":
        return max(max_degree(a) for a in e.args)
    raise ValueError(op)


def symbols(e: Expr) -> set[str]:
    if e.op == "lam":
        return {e.args[0]}
    if e.op == "poly":
        return _poly_symbols(e.args[0])
    out: set[str] = set()
    for a in e.args:
        if isinstance(a, Expr):
            out |= symbols(a)
    return out


def has_groups(e: Expr) -> bool:
    if e.op == "g":
        return True
    if e.op == "poly":
        return any(any(g) for c in e.args[0].terms.values() for (_l, g) in getattr(c, "d", {}))
    return any(isinstance(a, Expr) and has_groups(a) for a in e.args)


def _poly_symbols(p) -> set[str]:
    out: set[str] = set()
    for c in p.terms.values():
        d = getattr(c, "d", None)
        if d is None:
            continue
        names = c.ring.lam_names
        for lam, _g in d:
            out.update(nm for nm, k in zip(names, lam) if k)
    return out


def poly_expr(p: NCPoly) -> Expr:
    """Wrap an already expanded polynomial as an expression leaf."""
    return Expr("poly", (p,))


# --------------------------------------------------------------------------
# evaluation


_ROOTS: dict[str, Expr] = {}


def root_expr(name: str) -> Expr:
    """Bracket tree of the root vector x_name (standard Lyndon bracketing)."""
    r = _ROOTS.get(name)
    if r is None:
        split = lyndon_split(name)
        if split is None:
            r = Expr("x", (name,))
        else:
            r = Expr("br", (root_expr(split[0]), root_expr(split[1])))
        _ROOTS[name] = r
    return r


def evaluate(e: Expr, alg, theta: int = 2):
    """Evaluate in ``alg``, which provides: letter(i), scalar(CycNum or
    Fraction), lam(name), group(gamma), add(a, b), neg(a), mul(a, b),
    one(), inv_scalar(a) and chi(da, db) -> CycNum."""
    cache: dict = {}
    return _eval(e, alg, theta, cache)


class PolyAlgebra:
    """Evaluate expressions to ``NCPoly`` over a coefficient ring."""

    def __init__(self, ring, theta: int, braiding=None) -> None:
        self.ring = ring
        self.theta = theta
        self.braiding = braiding

    def letter(self, i: int):
        return NCPoly.gen(i, self.ring, self.theta)

    def scalar(self, c):
        return NCPoly.const(scalar_value(c, self.ring.n), self.ring, self.theta)

    def lam(self, name: str):
        if not hasattr(self.ring, "lam"):
            raise ParseError(f"symbol {name!r} needs a ring with lambda symbols")
        return NCPoly({"": self.ring.lam(name)}, self.ring, self.theta)

    def group(self, gam):
        if not hasattr(self.ring, "group"):
            raise ParseError("group elements need a smash-product ring")
        return NCPoly({"": self.ring.group(gam)}, self.ring, self.theta)

    def one(self):
        return NCPoly.const(1, self.ring, self.theta)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv_scalar(self, a):
        return NCPoly.const(_as_scalar(a).inv(), self.ring, self.theta)

    def chi(self, da, db):
        if self.braiding is None:
            raise ParseError("braided commutator needs a braiding")
        return self.braiding.chi(da, db)


def _as_scalar(a) -> CycNum:
    """Extract a CycNum from a constant polynomial-like value."""
    terms = a.terms
    if not terms:
        raise ZeroDivisionError("division by zero")
    if set(terms) != {""}:
        raise ParseError("division by a non-scalar")
    c = terms[""]
    if isinstance(c, CycNum):
        return c
    if not c.ring.is_scalar(c):
        raise ParseError("division by a non-scalar")
    return c.scalar_part()


def to_poly(e: Expr, ring, theta: int = 2, braiding=None) -> NCPoly:
    return evaluate(e, PolyAlgebra(ring, theta, braiding), theta)


def _eval(e: Expr, alg, theta: int, cache: dict):
    key = id(e)
    hit = cache.get(key)
    if hit is not None and hit[0] is e:
        return hit[1]
    op = e.op
    if op == "x":
        name = e.args[0]
        if len(name) == 1:
            r = alg.letter(int(name))
        else:
            r = _eval(root_expr(name), alg, theta, cache)
    elif op == "num":
        r = alg.scalar(e.args[0])
    elif op == "lam":
        r = alg.lam(e.args[0])
    elif op == "g":
        r = alg.group(e.args[0])
    elif op == "poly":
        r = _eval_poly(e.args[0], alg)
    elif op == "neg":
        r = alg.neg(_eval(e.args[0], alg, theta, cache))
    elif op == "inv":
        r = alg.inv_scalar(_eval(e.args[0], alg, theta, cache))
    elif op == "add":
        r = _eval(e.args[0], alg, theta, cache)
        for a in e.args[1:]:
            r = alg.add(r, _eval(a, alg, theta, cache))
    elif op == "mul":
        r = _eval(e.args[0], alg, theta, cache)
        for a in e.args[1:]:
            r = alg.mul(r, _eval(a, alg, theta, cache))
    elif op == "pow":
        base, k = e.args
        if k < 0:
            if base.op == "g":
                r = alg.group(tuple(k * a for a in base.args[0]))
            else:
                r = alg.inv_scalar(_eval(Expr("pow", (base, -k)), alg, theta, cache))
        else:
            b = _eval(base, alg, theta, cache)
            r = alg.one()
            for _ in range(k):
                r = alg.mul(r, b)
    elif op == "br":
        u, v = e.args
        du, dv = multideg(u, theta), multideg(v, theta)
        if du is None or dv is None:
            raise ParseError("braided commutator of inhomogeneous expressions")
        a = _eval(u, alg, theta, cache)
        b = _eval(v, alg, theta, cache)
        r = alg.add(alg.mul(a, b), alg.neg(alg.mul(alg.mul(b, a), alg.scalar(alg.chi(du, dv)))))
    else:
        raise ValueError(op)
    cache[key] = (e, r)
    return r


def _eval_poly(p, alg):
    words: dict = {"": alg.one()}

    def word_value(w: str):
        v = words.get(w)
        if v is None:
            v = alg.mul(word_value(w[:-1]), alg.letter(ord(w[-1]) - 96))
            words[w] = v
        return v

    acc = None
    for w in sorted(p.terms, key=lambda u: (len(u), u)):
        t = alg.mul(word_value(w), _coef_value(p.terms[w], alg))
        acc = t if acc is None else alg.add(acc, t)
    return acc if acc is not None else alg.scalar(Fraction(0))


def _coef_value(c, alg):
    if isinstance(c, CycNum):
        return alg.scalar(c)
    names = c.ring.lam_names
    acc = None
    for (lam, gam), v in sorted(c.d.items()):
        t = alg.scalar(v)
        for nm, k in zip(names, lam):
            for _ in range(k):
                t = alg.mul(t, alg.lam(nm))
        if any(gam):
            t = alg.mul(t, alg.group(gam))
        acc = t if acc is None else alg.add(acc, t)
    return acc if acc is not None else alg.scalar(Fraction(0))


def to_text(e: Expr) -> str:
    op = e.op
    if op == "poly":
        return f"({e.args[0]})"
    if op == "x":
        return "x" + e.args[0]
    if op == "num":
        v = e.args[0]
        if isinstance(v, Fraction):
            return str(v)
        from .cyclotomic import format_cyc

        s = format_cyc(v)
        return f"({s})" if (" " in s or s.startswith("-")) else s
    if op == "lam":
        return e.args[0]
    if op == "g":
        parts = [f"g{i + 1}^{a}" if a != 1 else f"g{i + 1}" for i, a in enumerate(e.args[0]) if a]
        return "*".join(parts) or "1"
    if op == "neg":
        return f"-({to_text(e.args[0])})"
    if op == "inv":
        return f"1/({to_text(e.args[0])})"
    if op == "add":
        out = to_text(e.args[0])
        for a in e.args[1:]:
            if a.op == "neg":
                out += f" - {_paren(a.args[0])}"
            else:
                out += f" + {to_text(a)}"
        return out
    if op == "mul":
        out = _paren(e.args[0]) if e.args[0].op != "inv" else to_text(e.args[0])
        for a in e.args[1:]:
            out += f"/{_paren_all(a.args[0])}" if a.op == "inv" else f"*{_paren(a)}"
        return out
    if op == "pow":
        return f"{_paren_all(e.args[0])}^{e.args[1]}"
    if op == "br":
        return f"br({to_text(e.args[0])}, {to_text(e.args[1])})"
    raise ValueError(op)


def _paren_all(e: Expr) -> str:
    s = to_text(e)
    return s if e.op in ("x", "lam", "g") or (e.op == "num" and isinstance(e.args[0], Fraction)
                                               and e.args[0].denominator == 1 and e.args[0] >= 0) else f"({s})"


def _paren(e: Expr) -> str:
    s = to_text(e)
    if e.op in ("add", "neg") or (e.op == "num" and any(ch in s for ch in "/^ ") and not s.startswith("(")):
        return f"({s})"
    return s


def scalar_value(x, n: int) -> CycNum:
    if isinstance(x, CycNum):
        return x.embed(n) if x.n != n else x
    return CycNum.rational(x, n)
