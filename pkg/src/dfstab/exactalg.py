"""Exact univariate polynomial arithmetic over the rationals.

A polynomial a_0 + a_1 x + ... + a_n x^n is stored as the tuple
(a_0, ..., a_n) of Fractions with a_n != 0; the zero polynomial is ().
Polys are immutable and hashable.

Besides ring arithmetic the module provides gcd, square-free decomposition,
rational roots and a capped exhaustive factor refinement (Kronecker's
method) whose `proved-irreducible` flag is a genuine certificate.
"""

from __future__ import annotations

import contextlib
import contextvars
import itertools
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

from sympy import divisors as _int_divisors
from sympy.polys.domains import ZZ
from sympy.polys.densearith import dup_exquo
from sympy.polys.euclidtools import dup_gcd
from sympy.polys.polyerrors import ExactQuotientFailed

from .linalg import determinant

Rat = Fraction
Number = Union[int, Fraction]

DEFAULT_FACTOR_CAP = 6

LINEAR = "linear"
PROVED_IRREDUCIBLE = "proved-irreducible"
UNVERIFIED_BLOCK = "unverified-block"


def _default_cap() -> int:
    raw = os.environ.get("DFSTAB_FACTOR_CAP")
    if raw is None:
        return DEFAULT_FACTOR_CAP
    try:
        return max(0, int(raw))
    except ValueError:
        return DEFAULT_FACTOR_CAP


_factor_cap: contextvars.ContextVar[int] = contextvars.ContextVar("factor_cap", default=_default_cap())


def current_factor_cap() -> int:
    return _factor_cap.get()


@contextlib.contextmanager
def factor_cap(cap: int) -> Iterator[None]:
    """Temporarily set the exhaustive factorization degree cap."""
    token = _factor_cap.set(int(cap))
    try:
        yield
    finally:
        _factor_cap.reset(token)


class Poly:
    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable[Number] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)
        self._hash = None

    # -- constructors --------------------------------------------------
    @classmethod
    def _raw(cls, coeffs: tuple[Fraction, ...]) -> Poly:
        # coeffs already normalized
        p = object.__new__(cls)
        p.coeffs = coeffs
        p._hash = None
        return p

    @classmethod
    def constant(cls, c: Number) -> Poly:
        return cls((c,))

    @classmethod
    def monomial(cls, k: int, c: Number = 1) -> Poly:
        return cls([0] * k + [c])

    @classmethod
    def x(cls) -> Poly:
        return cls((0, 1))

    @classmethod
    def from_roots(cls, roots: Iterable[Number]) -> Poly:
        p = ONE
        for r in roots:
            p = p * cls((-Fraction(r), 1))
        return p

    # -- basic data ----------------------------------------------------
    @property
    def degree(self) -> int:
        """Degree; the zero polynomial reports -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coeff(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def valuation(self) -> int:
        """Exponent of the lowest nonzero term."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        raise ValueError("valuation of the zero polynomial")

    def monic(self) -> Poly:
        if not self.coeffs:
            return self
        lc = self.coeffs[-1]
        if lc == 1:
            return self
        return Poly._raw(tuple(c / lc for c in self.coeffs))

    def __call__(self, v: Number) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * v + c
        return acc

    def derivative(self) -> Poly:
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def shift(self, c: Number) -> Poly:
        """Return p(x + c)."""
        cs = list(self.coeffs)
        n = len(cs)
        c = Fraction(c)
        if c == 0:
            return self
        for i in range(n):
            for j in range(n - 2, i - 1, -1):
                cs[j] += c * cs[j + 1]
        return Poly(cs)

    def compose(self, other: Poly) -> Poly:
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * other + Poly.constant(c)
        return acc

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other: Poly | Number) -> Poly:
        if not isinstance(other, Poly):
            other = Poly.constant(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly._raw(tuple(-c for c in self.coeffs))

    def __sub__(self, other: Poly | Number) -> Poly:
        if not isinstance(other, Poly):
            other = Poly.constant(other)
        return self + (-other)

    def __rsub__(self, other: Number) -> Poly:
        return Poly.constant(other) - self

    def __mul__(self, other: Poly | Number) -> Poly:
        if not isinstance(other, Poly):
            other = Fraction(other)
            if other == 0:
                return ZERO
            return Poly._raw(tuple(c * other for c in self.coeffs))
        if not self.coeffs or not other.coeffs:
            return ZERO
        # convolve integer multiples; one Fraction per output coefficient
        da, a = _integer_vector(self)
        db, b = _integer_vector(other)
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        den = da * db
        return Poly._raw(tuple(Fraction(c, den) for c in out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Poly:
        if k < 0:
            raise ValueError("negative polynomial power")
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other: Poly) -> tuple[Poly, Poly]:
        return poly_divmod(self, other)

    def __floordiv__(self, other: Poly) -> Poly:
        return poly_divmod(self, other)[0]

    def __mod__(self, other: Poly) -> Poly:
        return poly_divmod(self, other)[1]

    def exquo(self, other: Poly) -> Poly:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if self.degree < other.degree:
            if self.coeffs:
                raise ArithmeticError(f"{other} does not divide {self}")
            return ZERO
        # by Gauss's lemma an exact quotient by a primitive integer
        # polynomial has integer coefficients
        da, a = _integer_vector(self)
        db, b = _integer_vector(other)
        cb = math.gcd(*b)
        try:
            q = dup_exquo([ZZ(c) for c in reversed(a)], [ZZ(c // cb) for c in reversed(b)], ZZ)
        except ExactQuotientFailed:
            raise ArithmeticError(f"{other} does not divide {self}") from None
        scale = Fraction(db, da * cb)
        return Poly._raw(tuple(int(c) * scale for c in reversed(q)))

    def divides(self, other: Poly) -> bool:
        return not poly_divmod(other, self)[1].coeffs

    # -- protocol ------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly.constant(other).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(("Poly", self.coeffs))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({self.to_str()!r})"

    def __str__(self) -> str:
        return self.to_str()

    def to_str(self, var: str = "x") -> str:
        """Render in the operator grammar, highest degree first."""
        if not self.coeffs:
            return "0"
        parts: list[str] = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if i == 0:
                body = format_rat(mag)
            else:
                mono = var if i == 1 else f"{var}^{i}"
                body = mono if mag == 1 else f"{format_rat(mag)}*{mono}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


ZERO = Poly._raw(())
ONE = Poly._raw((Fraction(1),))
X = Poly._raw((Fraction(0), Fraction(1)))


def format_rat(c: Fraction) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


# ---------------------------------------------------------------------------
# division, gcd


def poly_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    if a.degree < b.degree:
        return ZERO, a
    rem = list(a.coeffs)
    db = b.degree
    inv_lc = 1 / b.lc
    bc = b.coeffs
    quot = [Fraction(0)] * (a.degree - db + 1)
    for k in range(a.degree - db, -1, -1):
        q = rem[k + db] * inv_lc
        quot[k] = q
        if q:
            for j in range(db + 1):
                rem[k + j] -= q * bc[j]
    return Poly(quot), Poly(rem[:db])


def _integer_vector(a: Poly) -> tuple[int, list[int]]:
    """(den, v) with a = v/den and v integral, lowest degree first."""
    den = math.lcm(*(c.denominator for c in a.coeffs))
    return den, [c.numerator * (den // c.denominator) for c in a.coeffs]


def _integer_dense(a: Poly) -> list:
    """Coefficients of an integer multiple of a, leading term first, as ZZ elements."""
    return [ZZ(c) for c in reversed(_integer_vector(a)[1])]


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd of a and b.

    Euclid over Q suffers from coefficient growth, so the gcd is taken over
    Z on integer multiples of the inputs (sympy's heuristic/modular gcd).
    """
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd of two zero polynomials")
    if a.is_zero() or b.is_zero():
        return (b if a.is_zero() else a).monic()
    if a.degree == 0 or b.degree == 0:
        return ONE
    g = dup_gcd(_integer_dense(a), _integer_dense(b), ZZ)
    return Poly([int(c) for c in reversed(g)]).monic()


def poly_xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) monic."""
    r0, r1 = a, b
    s0, s1 = ONE, ZERO
    t0, t1 = ZERO, ONE
    while r1.coeffs:
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    lc = r0.lc
    if lc == 0:
        raise ValueError("gcd of two zero polynomials")
    return r0.monic(), s0 * (1 / lc), t0 * (1 / lc)


def poly_lcm(a: Poly, b: Poly) -> Poly:
    if a.is_zero() or b.is_zero():
        return ZERO
    return (a * b).exquo(poly_gcd(a, b)).monic()


def inverse_mod(a: Poly, m: Poly) -> Poly:
    g, s, _ = poly_xgcd(a % m, m)
    if g != ONE:
        raise ArithmeticError("not invertible modulo the given polynomial")
    return s % m


def interpolate(points: Sequence[tuple[Number, Number]]) -> Poly:
    """Newton interpolation through (x_i, y_i) with distinct x_i."""
    xs = [Fraction(p[0]) for p in points]
    table = [Fraction(p[1]) for p in points]
    n = len(xs)
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            table[i] = (table[i] - table[i - 1]) / (xs[i] - xs[i - level])
    acc = ZERO
    for i in range(n - 1, -1, -1):
        acc = acc * Poly((-xs[i], 1)) + table[i]
    return acc


def falling_factorial(k: int) -> Poly:
    """s(s-1)...(s-k+1) as a polynomial in s."""
    acc = ONE
    for i in range(k):
        acc = acc * Poly((-i, 1))
    return acc


# ---------------------------------------------------------------------------
# factorization


@dataclass(frozen=True)
class Factor:
    poly: Poly
    multiplicity: int
    certainty: str = UNVERIFIED_BLOCK


@dataclass(frozen=True)
class Factorization:
    unit: Fraction
    factors: tuple[Factor, ...]

    def expand(self) -> Poly:
        acc = Poly.constant(self.unit)
        for f in self.factors:
            acc = acc * f.poly ** f.multiplicity
        return acc

    def squarefree_part(self) -> Poly:
        acc = ONE
        for f in self.factors:
            acc = acc * f.poly
        return acc

    @property
    def has_unverified(self) -> bool:
        return any(f.certainty == UNVERIFIED_BLOCK for f in self.factors)


def _certainty(p: Poly) -> str:
    return LINEAR if p.degree == 1 else UNVERIFIED_BLOCK


def squarefree_factor(a: Poly) -> Factorization:
    """Yun's square-free decomposition."""
    if a.is_zero():
        raise ValueError("square-free factorization of the zero polynomial")
    unit = a.lc
    f = a.monic()
    factors: list[Factor] = []
    if f.degree > 0:
        df = f.derivative()
        g = poly_gcd(f, df)
        b = f.exquo(g)
        c = df.exquo(g)
        d = c - b.derivative()
        i = 1
        while b.degree > 0:
            a_i = poly_gcd(b, d)
            b = b.exquo(a_i)
            c = d.exquo(a_i)
            d = c - b.derivative()
            if a_i.degree > 0:
                factors.append(Factor(a_i, i, _certainty(a_i)))
            i += 1
    return Factorization(unit, tuple(factors))


def squarefree_part(a: Poly) -> Poly:
    if a.is_constant():
        return ONE
    return a.exquo(poly_gcd(a, a.derivative())).monic()


def integer_normalize(a: Poly) -> list[int]:
    """Primitive integer coefficient list proportional to a (positive lc)."""
    den = 1
    for c in a.coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in a.coeffs]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    ints = [v // g for v in ints]
    if ints[-1] < 0:
        ints = [-v for v in ints]
    return ints


def rational_roots(a: Poly) -> list[tuple[Fraction, int]]:
    """All rational roots of a with multiplicities, in candidate order."""
    if a.is_zero():
        raise ValueError("rational roots of the zero polynomial")
    out: list[tuple[Fraction, int]] = []
    if a.degree < 1:
        return out
    v = a.valuation()
    if v:
        out.append((Fraction(0), v))
        a = Poly(a.coeffs[v:])
    if a.degree < 1:
        return out
    sf = squarefree_part(a)
    ints = integer_normalize(sf)
    roots: list[Fraction] = []
    if sf.degree == 1:
        roots.append(Fraction(-ints[0], ints[1]))
    else:
        cands = (
            Fraction(sign * p, q)
            for q in _int_divisors(abs(ints[-1]))
            for p in _int_divisors(abs(ints[0]))
            if math.gcd(p, q) == 1
            for sign in (1, -1)
        )
        for cand in cands:
            if _int_eval_zero(ints, cand):
                roots.append(cand)
                if len(roots) == sf.degree:
                    break
    for r in roots:
        lin = Poly((-r, 1))
        m = 0
        cur = a
        while True:
            q, rem = poly_divmod(cur, lin)
            if rem.coeffs:
                break
            cur = q
            m += 1
        out.append((r, m))
    return out


def _int_eval_zero(ints: list[int], r: Fraction) -> bool:
    # homogeneous integer evaluation of sum c_i p^i q^(n-i)
    p, q = r.numerator, r.denominator
    n = len(ints) - 1
    acc = 0
    for i, c in enumerate(ints):
        acc += c * p**i * q ** (n - i)
    return acc == 0


def integer_roots(a: Poly) -> list[int]:
    return sorted(int(r) for r, _ in rational_roots(a) if r.denominator == 1) if not a.is_zero() else []


def _kronecker_split(f: Poly) -> list[Poly]:
    """Split a square-free polynomial without rational roots into
    irreducible monic factors by exhaustive divisor search."""
    n = f.degree
    ints = integer_normalize(f)
    fi = Poly(ints)
    for m in range(2, n // 2 + 1):
        g = _kronecker_find(fi, ints, m)
        if g is not None:
            return _kronecker_split(g.monic()) + _kronecker_split(f.exquo(g).monic())
    return [f.monic()]


def _kronecker_find(fi: Poly, ints: list[int], m: int) -> Poly | None:
    # points with the smallest divisor counts keep the search small
    cands = []
    for a in range(-12, 13):
        val = int(fi(a))
        cands.append((len(_int_divisors(abs(val))), abs(a), a, val))
    cands.sort()
    pts = cands[: m + 1]
    lc_divs = set(_int_divisors(abs(ints[-1])))
    choices = []
    for k, (_, _, a, val) in enumerate(pts):
        divs = list(_int_divisors(abs(val)))
        choices.append(divs if k == 0 else divs + [-d for d in divs])
    for combo in itertools.product(*choices):
        g = interpolate([(pts[k][2], combo[k]) for k in range(m + 1)])
        if g.degree != m:
            continue
        if any(c.denominator != 1 for c in g.coeffs):
            continue
        if abs(int(g.lc)) not in lc_divs:
            continue
        if not poly_divmod(fi, g)[1].coeffs:
            return g
    return None


def refine_factors(f: Factorization, exhaustive_degree_cap: int | None = None) -> Factorization:
    """Split square-free blocks by rational roots, then by exhaustive search
    for blocks of degree <= cap; larger blocks stay `unverified-block`."""
    cap = current_factor_cap() if exhaustive_degree_cap is None else exhaustive_degree_cap
    out: list[Factor] = []
    for fac in f.factors:
        rest = fac.poly
        for r, _ in rational_roots(rest):
            lin = Poly((-r, 1))
            rest = rest.exquo(lin)
            out.append(Factor(lin, fac.multiplicity, LINEAR))
        if rest.degree < 1:
            continue
        rest = rest.monic()
        if rest.degree <= cap:
            for piece in _kronecker_split(rest):
                out.append(Factor(piece, fac.multiplicity, PROVED_IRREDUCIBLE))
        else:
            out.append(Factor(rest, fac.multiplicity, UNVERIFIED_BLOCK))
    return Factorization(f.unit, tuple(out))


def factor(a: Poly, cap: int | None = None) -> Factorization:
    return refine_factors(squarefree_factor(a), cap)


# ---------------------------------------------------------------------------
# quotient-ring norms


def norm_mod(g: Poly, p: Poly) -> Fraction:
    """Product of g(c) over the roots c of the monic polynomial p."""
    k = p.degree
    g = g % p
    if k == 0:
        return Fraction(1)
    if k == 1:
        return g(-p.coeffs[0] / p.coeffs[1])
    # matrix of multiplication by g on the basis 1, x, ..., x^(k-1)
    cols = []
    cur = g
    for _ in range(k):
        cols.append([cur.coeff(i) for i in range(k)])
        cur = (cur * X) % p
    rows = [[cols[j][i] for j in range(k)] for i in range(k)]
    return determinant(rows)


def norm_polynomial(family, p: Poly, degree_bound: int) -> Poly:
    """Interpolate N(s) = prod_{p(c)=0} E(s, c), where family(s) returns the
    polynomial E(s, x) and N has degree at most degree_bound."""
    p = p.monic()
    pts = [(s, norm_mod(family(s), p)) for s in range(degree_bound + 1)]
    return interpolate(pts)
