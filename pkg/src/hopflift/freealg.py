"""Free associative algebra on x_1..x_theta with cyclotomic coefficients.

Words are plain strings over the alphabet 'a', 'b', 'c', ...: letter i
(1-based) is ``chr(96 + i)``.  Python's string order then agrees with the
default letter precedence x1 < x2 < ..., and substring search gives fast
factor tests.

Polynomials are dictionaries word -> coefficient.  Coefficients live in one
of two rings:

* ``CycField(n)``: plain ``CycNum`` elements of Q(zeta_n);
* ``CoefRing``: Q(zeta_n)[lambda][Gamma], finite sums of
  ``c * lambda^mu * gamma`` stored in a ``Coef``.  Group elements sit to the
  right of words, so moving a word past them twists by a character.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .cyclotomic import CycNum, format_cyc, make_root

__all__ = [
    "Coef",
    "CoefRing",
    "CycField",
    "NCPoly",
    "NonUnitError",
    "format_word",
    "leading_word",
    "letter",
    "letters_of",
    "multidegree",
    "poly_add",
    "poly_mul",
    "word_from_letters",
    "word_key",
]

INHOMOGENEOUS = "inhomogeneous"


class NonUnitError(ArithmeticError):
    """A leading coefficient that is not a unit of the coefficient ring."""


def letter(i: int) -> str:
    return chr(96 + i)


def word_from_letters(letters: Iterable[int]) -> str:
    return "".join(chr(96 + i) for i in letters)


def letters_of(w: str) -> tuple[int, ...]:
    return tuple(ord(ch) - 96 for ch in w)


def word_multidegree(w: str, theta: int) -> tuple[int, ...]:
    return tuple(w.count(chr(97 + i)) for i in range(theta))


def word_key(w: str) -> tuple[int, str]:
    """Sort key of deglex with the natural precedence."""
    return (len(w), w)


def format_word(w: str) -> str:
    """Render a word with run-length powers, e.g. 'aab' -> 'x1^2*x2'."""
    if not w:
        return "1"
    out = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        s = f"x{ord(w[i]) - 96}"
        out.append(s if j - i == 1 else f"{s}^{j - i}")
        i = j
    return "*".join(out)


# --------------------------------------------------------------------------
# coefficient rings


class CycField:
    """Q(zeta_n) used directly as a coefficient ring."""

    twisted = False

    def __init__(self, n: int) -> None:
        self.n = n
        self.one = CycNum.rational(1, n)
        self.zero = CycNum.rational(0, n)

    def scalar(self, c) -> CycNum:
        if isinstance(c, CycNum):
            return c.embed(self.n) if c.n != self.n and self.n % c.n == 0 else c
        return CycNum.rational(c, self.n)

    def unit_inverse(self, c: CycNum) -> CycNum:
        return c.inv()

    def twist(self, c, md):
        return c

    def is_scalar(self, c) -> bool:
        return True

    def fmt(self, c: CycNum) -> str:
        return format_cyc(c)

    def __eq__(self, other) -> bool:
        return isinstance(other, CycField) and other.n == self.n

    def __hash__(self) -> int:
        return hash(("CycField", self.n))


@dataclass(frozen=True)
class CoefRing:
    """Q(zeta_n)[lambda_1..lambda_k][Gamma] with Gamma = Z^m x finite orders.

    ``chi_exp[k][j]`` is the exponent e with chi_j(gamma_k) = zeta_n^e, where
    gamma_k are the generators of Gamma and chi_j is the character of the
    letter x_j.  ``group_orders[k]`` is 0 for an infinite cyclic factor.
    """

    n: int
    chi_exp: tuple[tuple[int, ...], ...]
    group_orders: tuple[int, ...]
    lam_names: tuple[str, ...] = ()
    lam_degrees: tuple[tuple[int, ...], ...] = ()
    _roots: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    twisted = True

    @property
    def rank(self) -> int:
        return len(self.group_orders)

    @property
    def nlam(self) -> int:
        return len(self.lam_names)

    @property
    def e_lam(self) -> tuple[int, ...]:
        return (0,) * len(self.lam_names)

    @property
    def e_gam(self) -> tuple[int, ...]:
        return (0,) * len(self.group_orders)

    @property
    def one(self) -> Coef:
        return Coef(self, {(self.e_lam, self.e_gam): CycNum.rational(1, self.n)})

    def root(self, k: int) -> CycNum:
        k %= self.n
        r = self._roots.get(k)
        if r is None:
            r = self._roots[k] = make_root(self.n, k)
        return r

    def reduce_gamma(self, gam) -> tuple[int, ...]:
        return tuple(e % m if m else e for e, m in zip(gam, self.group_orders))

    def scalar(self, c) -> Coef:
        if not isinstance(c, CycNum):
            c = CycNum.rational(c, self.n)
        elif c.n != self.n:
            c = c.embed(self.n)
        if c.is_zero():
            return Coef(self, {})
        return Coef(self, {(self.e_lam, self.e_gam): c})

    def monomial(self, c=1, lam=None, gam=None) -> Coef:
        if not isinstance(c, CycNum):
            c = CycNum.rational(c, self.n)
        elif c.n != self.n:
            c = c.embed(self.n)
        lam = tuple(lam) if lam is not None else self.e_lam
        gam = self.reduce_gamma(gam) if gam is not None else self.e_gam
        return Coef(self, {(lam, gam): c} if not c.is_zero() else {})

    def lam(self, name: str) -> Coef:
        e = [0] * self.nlam
        e[self.lam_names.index(name)] = 1
        return self.monomial(1, lam=e)

    def group(self, gam) -> Coef:
        return self.monomial(1, gam=gam)

    def char_exp(self, gam, md) -> int:
        """Exponent k with chi_md(gam) = zeta_n^k."""
        s = 0
        ce = self.chi_exp
        for gk, row in zip(gam, ce):
            if gk:
                for j, mj in enumerate(md):
                    if mj:
                        s += gk * row[j] * mj
        return s % self.n

    def twist(self, c: Coef, md) -> Coef:
        out = {}
        for key, v in c.d.items():
            k = self.char_exp(key[1], md)
            out[key] = v if k == 0 else v * self.root(k)
        return Coef(self, out)

    def unit_inverse(self, c: Coef) -> Coef:
        if len(c.d) != 1:
            raise NonUnitError(f"coefficient {c} is not a unit")
        (lam, gam), v = next(iter(c.d.items()))
        if any(lam):
            raise NonUnitError(f"coefficient {c} is not a unit")
        return Coef(self, {(lam, self.reduce_gamma(tuple(-e for e in gam))): v.inv()})

    def is_scalar(self, c: Coef) -> bool:
        return all(k == (self.e_lam, self.e_gam) for k in c.d)

    def fmt(self, c: Coef) -> str:
        return str(c)


class Coef:
    """Element of a ``CoefRing``: dict (lambda exponents, gamma) -> CycNum."""

    __slots__ = ("ring", "d")

    def __init__(self, ring: CoefRing, d: dict) -> None:
        self.ring = ring
        self.d = d

    def is_zero(self) -> bool:
        return not self.d

    def __bool__(self) -> bool:
        return bool(self.d)

    def _lift(self, other) -> Coef:
        if isinstance(other, Coef):
            return other
        return self.ring.scalar(other)

    def __add__(self, other) -> Coef:
        other = self._lift(other)
        out = dict(self.d)
        for k, v in other.d.items():
            w = out.get(k)
            if w is None:
                out[k] = v
            else:
                w = w + v
                if w.is_zero():
                    del out[k]
                else:
                    out[k] = w
        return Coef(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> Coef:
        return Coef(self.ring, {k: -v for k, v in self.d.items()})

    def __sub__(self, other) -> Coef:
        return self + (-self._lift(other))

    def __rsub__(self, other) -> Coef:
        return self._lift(other) + (-self)

    def __mul__(self, other) -> Coef:
        if isinstance(other, Coef):
            ring = self.ring
            orders = ring.group_orders
            if len(other.d) == 1 and len(self.d) > 1:
                self, other = other, self
            if len(self.d) == 1:
                # monomial times anything: exponents shift, no collisions
                ((l1, g1), v1), = self.d.items()
                shift_l = any(l1)
                shift_g = any(g1)
                out = {}
                for (l2, g2), v2 in other.d.items():
                    lam = tuple(a + b for a, b in zip(l1, l2)) if shift_l else l2
                    gam = tuple((a + b) % m if m else a + b for a, b, m in zip(g1, g2, orders)) if shift_g else g2
                    out[(lam, gam)] = v1 * v2
                return Coef(ring, out)
            out: dict = {}
            for (l1, g1), v1 in self.d.items():
                for (l2, g2), v2 in other.d.items():
                    lam = tuple(a + b for a, b in zip(l1, l2))
                    gam = tuple(
                        (a + b) % m if m else a + b for a, b, m in zip(g1, g2, orders)
                    )
                    key = (lam, gam)
                    w = out.get(key)
                    out[key] = v1 * v2 if w is None else w + v1 * v2
            return Coef(ring, {k: v for k, v in out.items() if not v.is_zero()})
        if not isinstance(other, CycNum):
            other = CycNum.rational(other, self.ring.n)
        if other.is_zero():
            return Coef(self.ring, {})
        return Coef(self.ring, {k: v * other for k, v in self.d.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Coef):
            try:
                other = self.ring.scalar(other)
            except TypeError:
                return NotImplemented
        return self.d == other.d

    def __hash__(self) -> int:
        return hash(frozenset(self.d.items()))

    def scalar_part(self) -> CycNum:
        r = self.ring
        return self.d.get((r.e_lam, r.e_gam), CycNum.rational(0, r.n))

    def specialize(self, values: dict[str, CycNum]) -> Coef:
        """Substitute numbers for some lambda symbols."""
        ring = self.ring
        out = Coef(ring, {})
        for (lam, gam), v in self.d.items():
            c = v
            rest = list(lam)
            for i, name in enumerate(ring.lam_names):
                if name in values and lam[i]:
                    c = c * (values[name] ** lam[i])
                    rest[i] = 0
            out = out + ring.monomial(c, rest, gam)
        return out

    def __repr__(self) -> str:
        return f"Coef({self})"

    def __str__(self) -> str:
        if not self.d:
            return "0"
        ring = self.ring
        parts = []
        for (lam, gam), v in sorted(self.d.items()):
            mono = []
            for name, e in zip(ring.lam_names, lam):
                if e:
                    mono.append(name if e == 1 else f"{name}^{e}")
            for k, e in enumerate(gam):
                if e:
                    mono.append(f"g{k + 1}" if e == 1 else f"g{k + 1}^{e}")
            parts.append(_scaled(v, "*".join(mono)))
        return " + ".join(parts).replace("+ -", "- ")


def _scaled(v: CycNum, mono: str) -> str:
    s = format_cyc(v)
    if not mono:
        return s
    if s == "1":
        return mono
    if s == "-1":
        return "-" + mono
    if " " in s:
        return f"({s})*{mono}"
    return f"{s}*{mono}"


# --------------------------------------------------------------------------
# polynomials


def _padd_into(acc: dict, p: dict, scale=None) -> None:
    for w, c in p.items():
        if scale is not None:
            c = c * scale
        old = acc.get(w)
        if old is None:
            if not c.is_zero():
                acc[w] = c
        else:
            s = old + c
            if s.is_zero():
                del acc[w]
            else:
                acc[w] = s


def _pmul(p: dict, q: dict, ring, theta: int) -> dict:
    out: dict = {}
    twisted = ring.twisted
    for w2, c2 in q.items():
        md = word_multidegree(w2, theta) if twisted else None
        for w1, c1 in p.items():
            c = (ring.twist(c1, md) if twisted else c1) * c2
            w = w1 + w2
            old = out.get(w)
            out[w] = c if old is None else old + c
    return {w: c for w, c in out.items() if not c.is_zero()}


class NCPoly:
    """Element of the free algebra (or of its smash product with a group).

    ``terms`` maps words to nonzero coefficients of ``ring``; ``theta`` is the
    number of letters.
    """

    __slots__ = ("terms", "ring", "theta")

    def __init__(self, terms: dict, ring, theta: int = 2) -> None:
        self.terms = {w: c for w, c in terms.items() if not c.is_zero()}
        self.ring = ring
        self.theta = theta

    # constructors
    @classmethod
    def zero(cls, ring, theta: int = 2) -> NCPoly:
        return cls({}, ring, theta)

    @classmethod
    def const(cls, c, ring, theta: int = 2) -> NCPoly:
        return cls({"": ring.scalar(c)}, ring, theta)

    @classmethod
    def word(cls, w: str, ring, theta: int = 2, c=1) -> NCPoly:
        return cls({w: ring.scalar(c)}, ring, theta)

    @classmethod
    def gen(cls, i: int, ring, theta: int = 2) -> NCPoly:
        return cls.word(letter(i), ring, theta)

    def _like(self, terms: dict) -> NCPoly:
        out = NCPoly.__new__(NCPoly)
        out.terms = terms
        out.ring = self.ring
        out.theta = self.theta
        return out

    def _lift(self, other) -> NCPoly:
        if isinstance(other, NCPoly):
            return other
        return self._like({"": self.ring.scalar(other)} if other != 0 else {})

    # arithmetic
    def __add__(self, other) -> NCPoly:
        other = self._lift(other)
        acc = dict(self.terms)
        _padd_into(acc, other.terms)
        return self._like(acc)

    __radd__ = __add__

    def __neg__(self) -> NCPoly:
        return self._like({w: -c for w, c in self.terms.items()})

    def __sub__(self, other) -> NCPoly:
        return self + (-self._lift(other))

    def __rsub__(self, other) -> NCPoly:
        return self._lift(other) - self

    def __mul__(self, other) -> NCPoly:
        if isinstance(other, NCPoly):
            return self._like(_pmul(self.terms, other.terms, self.ring, self.theta))
        return self.scale(other)

    def __rmul__(self, other) -> NCPoly:
        # scalars and lambda symbols are central
        return self.scale(other)

    def __pow__(self, k: int) -> NCPoly:
        if k < 0:
            raise ValueError("negative power")
        out = self._like({"": self.ring.one})
        for _ in range(k):
            out = out * self
        return out

    def scale(self, c) -> NCPoly:
        """Multiply by a coefficient placed on the right."""
        if not isinstance(c, (CycNum, Coef)):
            c = self.ring.scalar(c)
        out = {}
        for w, v in self.terms.items():
            x = v * c
            if not x.is_zero():
                out[w] = x
        return self._like(out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NCPoly):
            other = self._lift(other)
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    # queries
    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def multidegree(self):
        return multidegree(self)

    def is_homogeneous(self) -> bool:
        return multidegree(self) != INHOMOGENEOUS

    def leading_word(self, order: str | None = None) -> str:
        return leading_word(self, order)

    def coeff(self, w: str):
        return self.terms.get(w, self.ring.scalar(0))

    def __repr__(self) -> str:
        return f"NCPoly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, key=lambda u: (-len(u), u)):
            c = self.terms[w]
            fw = "" if not w else format_word(w)
            if self.ring.twisted:
                # scalar and lambdas in front, group elements after the word
                for (lam, gam), v in sorted(c.d.items()):
                    front = _lam_text(self.ring, lam)
                    back = _gam_text(gam)
                    body = "*".join(x for x in (front, fw, back) if x)
                    parts.append(_scaled(v, body))
                continue
            s = self.ring.fmt(c)
            if not fw:
                parts.append(s if " " not in s else f"({s})")
            elif s == "1":
                parts.append(fw)
            elif s == "-1":
                parts.append("-" + fw)
            elif " " in s:
                parts.append(f"({s})*{fw}")
            else:
                parts.append(f"{s}*{fw}")
        return " + ".join(parts).replace("+ -", "- ")


def _lam_text(ring, lam) -> str:
    return "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(ring.lam_names, lam) if e)


def _gam_text(gam) -> str:
    return "*".join(f"g{k + 1}" if e == 1 else f"g{k + 1}^{e}" for k, e in enumerate(gam) if e)


def poly_add(p: NCPoly, q: NCPoly) -> NCPoly:
    return p + q


def poly_mul(p: NCPoly, q: NCPoly) -> NCPoly:
    return p * q


def order_key(order: str | None):
    """Sort key for deglex under a letter precedence.

    ``order`` lists letters from smallest to largest, e.g. "21" makes
    x2 < x1.  None means the natural precedence.
    """
    if not order or order == "".join(str(i) for i in range(1, len(order) + 1)):
        return word_key
    rank = {letter(int(ch)): chr(97 + k) for k, ch in enumerate(order)}
    table = str.maketrans(rank)
    return lambda w: (len(w), w.translate(table))


def leading_word(p: NCPoly, order: str | None = None) -> str:
    if not p.terms:
        raise ValueError("leading word of the zero polynomial")
    return max(p.terms, key=order_key(order))


def multidegree(p: NCPoly):
    """Common letter count of all words, or "inhomogeneous"."""
    degs = {word_multidegree(w, p.theta) for w in p.terms}
    if len(degs) != 1:
        return INHOMOGENEOUS if degs else (0,) * p.theta
    return next(iter(degs))

