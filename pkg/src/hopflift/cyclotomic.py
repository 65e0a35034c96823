"""Exact arithmetic in cyclotomic fields Q(zeta_n).

Elements are stored in the power basis 1, z, ..., z^(phi(n)-1) of
Q[x]/Phi_n(x) as a tuple of integer numerators over one positive common
denominator.  Everything is exact; there is no floating point here.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import gcd

__all__ = [
    "CycNum",
    "ZeroDivision",
    "cyclotomic_poly",
    "euler_phi",
    "format_cyc",
    "make_root",
    "order_of",
    "parse_cyc",
    "root_log",
]


class ZeroDivision(ArithmeticError):
    """Raised when inverting the zero element of a cyclotomic field."""


def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # den is monic; integer coefficients, lowest degree first
    num = list(num)
    dd = len(den) - 1
    if len(num) - 1 < dd:
        return [0], num
    quot = [0] * (len(num) - dd)
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k]
        if c:
            quot[k - dd] = c
            for i in range(dd + 1):
                num[k - dd + i] -= c * den[i]
    return quot, num[:dd] or [0]


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    # x^n - 1 = prod_{d | n} Phi_d
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num, rem = _poly_divmod(num, list(cyclotomic_poly(d)))
            assert not any(rem)
    return tuple(num)


class _Field:
    """Precomputed reduction data for Q(zeta_n)."""

    __slots__ = ("n", "phi", "red", "root_cache")

    def __init__(self, n: int) -> None:
        self.n = n
        self.phi = euler_phi(n)
        poly = cyclotomic_poly(n)
        phi = self.phi
        # red[k] = x^k mod Phi_n for 0 <= k < max(2*phi - 1, n)
        red: list[tuple[int, ...]] = []
        cur = [0] * phi
        cur[0] = 1
        for _ in range(max(2 * phi - 1, n, 1)):
            red.append(tuple(cur))
            # multiply by x
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                for i in range(phi):
                    cur[i] -= top * poly[i]
        self.red = red
        self.root_cache: dict[int, CycNum] = {}


@lru_cache(maxsize=None)
def _field(n: int) -> _Field:
    if n < 1:
        raise ValueError(f"conductor must be positive, got {n}")
    return _Field(n)


def _normalize(num: list[int], den: int) -> tuple[tuple[int, ...], int]:
    if den == 1:
        return tuple(num), 1
    if den < 0:
        num = [-c for c in num]
        den = -den
    g = gcd(den, *num)
    if g > 1:
        num = [c // g for c in num]
        den //= g
    return tuple(num), den


class CycNum:
    """An element of Q(zeta_n), immutable."""

    __slots__ = ("n", "num", "den", "_hash")

    def __init__(self, n: int, num, den: int = 1, _normalized: bool = False) -> None:
        f = _field(n)
        if not _normalized:
            num = list(num)
            if len(num) != f.phi:
                raise ValueError(f"expected {f.phi} coefficients for conductor {n}")
            if den == 0:
                raise ZeroDivision("zero denominator")
            num, den = _normalize(num, den)
        self.n = n
        self.num = num
        self.den = den
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def rational(cls, value, n: int = 1) -> CycNum:
        q = Fraction(value)
        phi = _field(n).phi
        num = [q.numerator] + [0] * (phi - 1)
        return cls(n, tuple(num), q.denominator, _normalized=True)

    @classmethod
    def from_fractions(cls, n: int, coeffs) -> CycNum:
        fr = [Fraction(c) for c in coeffs]
        den = 1
        for c in fr:
            den = den * c.denominator // gcd(den, c.denominator)
        return cls(n, [int(c * den) for c in fr], den)

    # -- basic queries ------------------------------------------------------

    @property
    def conductor(self) -> int:
        return self.n

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    def is_zero(self) -> bool:
        return not any(self.num)

    def __bool__(self) -> bool:
        return any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.num[0], self.den)

    # -- conductor handling -------------------------------------------------

    def embed(self, m: int) -> CycNum:
        """Image under Q(zeta_n) -> Q(zeta_m); requires n | m."""
        if m == self.n:
            return self
        if m % self.n:
            raise ValueError(f"cannot embed conductor {self.n} into {m}")
        step = m // self.n
        f = _field(m)
        out = [0] * f.phi
        for k, c in enumerate(self.num):
            if c:
                for i, r in enumerate(f.red[k * step]):
                    if r:
                        out[i] += c * r
        return CycNum(m, out, self.den)

    def _coerce(self, other) -> tuple[CycNum, CycNum]:
        if not isinstance(other, CycNum):
            other = CycNum.rational(other, self.n)
        if other.n == self.n:
            return self, other
        m = self.n * other.n // gcd(self.n, other.n)
        return self.embed(m), other.embed(m)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other) -> CycNum:
        if not isinstance(other, CycNum) or other.n != self.n:
            try:
                a, b = self._coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
            return a + b
        if self.den == other.den:
            num = [x + y for x, y in zip(self.num, other.num)]
            return CycNum(self.n, num, self.den)
        d1, d2 = self.den, other.den
        num = [x * d2 + y * d1 for x, y in zip(self.num, other.num)]
        return CycNum(self.n, num, d1 * d2)

    __radd__ = __add__

    def __neg__(self) -> CycNum:
        return CycNum(self.n, tuple(-c for c in self.num), self.den, _normalized=True)

    def __sub__(self, other) -> CycNum:
        if not isinstance(other, CycNum):
            try:
                other = CycNum.rational(other, self.n)
            except (TypeError, ValueError):
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> CycNum:
        return (-self) + other

    def __mul__(self, other) -> CycNum:
        if not isinstance(other, CycNum) or other.n != self.n:
            if isinstance(other, (int, Fraction)):
                q = Fraction(other)
                return CycNum(self.n, [c * q.numerator for c in self.num], self.den * q.denominator)
            try:
                a, b = self._coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
            return a * b
        f = _field(self.n)
        phi = f.phi
        if phi == 1:
            return CycNum(self.n, (self.num[0] * other.num[0],), self.den * other.den)
        a, b = self.num, other.num
        prod = [0] * (2 * phi - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] += ai * bj
        out = prod[:phi]
        red = f.red
        for k in range(phi, 2 * phi - 1):
            c = prod[k]
            if c:
                for i, r in enumerate(red[k]):
                    if r:
                        out[i] += c * r
        return CycNum(self.n, out, self.den * other.den)

    __rmul__ = __mul__

    def inv(self) -> CycNum:
        if self.is_zero():
            raise ZeroDivision("inverse of zero in a cyclotomic field")
        if self.is_rational():
            c = self.num[0]
            return CycNum(self.n, [self.den] + [0] * (len(self.num) - 1), c)
        # a^{-1} = N(a)^{-1} * prod of the other Galois conjugates
        n = self.n
        conj_prod = CycNum.rational(1, n)
        for k in range(2, n):
            if gcd(k, n) == 1:
                conj_prod = conj_prod * self.galois(k)
        norm = self * conj_prod
        assert norm.is_rational()
        return conj_prod * Fraction(norm.den, norm.num[0])

    def __truediv__(self, other) -> CycNum:
        if not isinstance(other, CycNum):
            other = CycNum.rational(other, self.n)
        return self * other.inv()

    def __rtruediv__(self, other) -> CycNum:
        return CycNum.rational(other, self.n) * self.inv()

    def __pow__(self, k: int) -> CycNum:
        if k < 0:
            return self.inv() ** (-k)
        result = CycNum.rational(1, self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def galois(self, k: int) -> CycNum:
        """Apply the automorphism z -> z^k (gcd(k, n) = 1)."""
        f = _field(self.n)
        out = [0] * f.phi
        for j, c in enumerate(self.num):
            if c:
                for i, r in enumerate(f.red[(j * k) % self.n]):
                    if r:
                        out[i] += c * r
        return CycNum(self.n, out, self.den)

    def times_root(self, k: int) -> CycNum:
        """Multiply by zeta_n^k (cheap path used in twisting)."""
        k %= self.n
        if k == 0:
            return self
        return self * make_root(self.n, k)

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, CycNum):
            if other.n == self.n:
                return self.den == other.den and self.num == other.num
            a, b = self._coerce(other)
            return a.den == b.den and a.num == b.num
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self.num[0], self.den) == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            # hash by value so equal elements of different conductors collide
            if self.is_rational():
                self._hash = hash(Fraction(self.num[0], self.den))
            else:
                self._hash = hash(self.minimal_form())
        return self._hash

    def minimal_form(self) -> tuple[int, tuple[int, ...], int]:
        """(conductor, num, den) of this value in the smallest field holding it."""
        n = self.n
        for d in range(1, n + 1):
            if n % d == 0:
                try:
                    cand = _descend(self, d)
                except ValueError:
                    continue
                return d, cand.num, cand.den
        raise AssertionError("unreachable")

    # -- printing -----------------------------------------------------------

    def __repr__(self) -> str:
        return f"CycNum({self.n}, {self.num}, {self.den})"

    def __str__(self) -> str:
        return format_cyc(self)


def _descend(a: CycNum, d: int) -> CycNum:
    """Return a as an element of Q(zeta_d) if it lies there."""
    if d == a.n:
        return a
    f = _field(d)
    # solve in the subfield by trying the natural basis guess: a = sum c_j z_d^j
    # z_d = z_n^(n/d); express a in the basis of powers of z_d and check
    step = a.n // d
    # build matrix of embedded basis vectors and solve by elimination over Q
    basis = [CycNum(d, [1 if i == j else 0 for i in range(f.phi)], 1).embed(a.n) for j in range(f.phi)]
    target = [Fraction(c, a.den) for c in a.num]
    cols = [[Fraction(c, b.den) for c in b.num] for b in basis]
    sol = _solve_rational(cols, target)
    if sol is None:
        raise ValueError("not in subfield")
    del step
    return CycNum.from_fractions(d, sol)


def _solve_rational(cols: list[list[Fraction]], target: list[Fraction]) -> list[Fraction] | None:
    rows = len(target)
    ncol = len(cols)
    mat = [[cols[j][i] for j in range(ncol)] + [target[i]] for i in range(rows)]
    piv_cols = []
    r = 0
    for c in range(ncol):
        p = next((i for i in range(r, rows) if mat[i][c] != 0), None)
        if p is None:
            continue
        mat[r], mat[p] = mat[p], mat[r]
        pv = mat[r][c]
        mat[r] = [x / pv for x in mat[r]]
        for i in range(rows):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, rows):
        if mat[i][-1] != 0:
            return None
    sol = [Fraction(0)] * ncol
    for i, c in enumerate(piv_cols):
        sol[c] = mat[i][-1]
    return sol


def make_root(n: int, k: int) -> CycNum:
    """zeta_n^k as an element of Q(zeta_n)."""
    f = _field(n)
    k %= n
    cached = f.root_cache.get(k)
    if cached is None:
        cached = CycNum(n, f.red[k], 1)
        f.root_cache[k] = cached
    return cached


def root_log(a: CycNum) -> Fraction | None:
    """t in [0, 1) with a = exp(2 pi i t), or None if a is not a root of unity."""
    if a.is_zero():
        return None
    n = a.n
    for k in range(n):
        z = make_root(n, k)
        if a == z:
            return Fraction(k, n)
        if a == -z:
            # -z_n^k = z_{2n}^{2k+n}
            return Fraction(2 * k + n, 2 * n) % 1
    return None


def order_of(a: CycNum) -> int | None:
    """Multiplicative order of a, or None if a is not a root of unity."""
    t = root_log(a)
    if t is None:
        return None
    return t.denominator


# -- text syntax --------------------------------------------------------------

def _fmt_rat(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_cyc(a: CycNum) -> str:
    """Render as e.g. ``1 + z12^2 - 2/3*z12^3``; rationals print bare."""
    parts: list[str] = []
    for k, c in enumerate(a.num):
        if not c:
            continue
        q = Fraction(c, a.den)
        sign = "-" if q < 0 else "+"
        mag = -q if q < 0 else q
        if k == 0:
            body = _fmt_rat(mag)
        else:
            mono = f"z{a.n}^{k}"
            body = mono if mag == 1 else f"{_fmt_rat(mag)}*{mono}"
        parts.append((sign, body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


_TERM = re.compile(r"\s*([+-])?\s*(?:(\d+)(?:/(\d+))?)?\s*(\*)?\s*(?:z(\d+)\^(-?\d+))?\s*")


def parse_cyc(text: str) -> CycNum:
    """Parse the syntax produced by :func:`format_cyc`."""
    s = text.strip()
    if not s:
        raise ValueError("empty scalar")
    terms: list[tuple[Fraction, int, int]] = []
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse scalar {text!r} at {pos}")
        sign, p, q, star, n, k = m.groups()
        if sign is None and not first:
            raise ValueError(f"missing operator in {text!r}")
        if p is None and n is None:
            raise ValueError(f"cannot parse scalar {text!r} at {pos}")
        if star and (p is None or n is None):
            raise ValueError(f"dangling '*' in {text!r}")
        coef = Fraction(int(p), int(q) if q else 1) if p is not None else Fraction(1)
        if sign == "-":
            coef = -coef
        terms.append((coef, int(n) if n else 1, int(k) if k else 0))
        pos = m.end()
        first = False
    cond = 1
    for _, n, _ in terms:
        cond = cond * n // gcd(cond, n)
    total = CycNum.rational(0, cond)
    for coef, n, k in terms:
        total = total + make_root(n, k).embed(cond) * coef
    return total
