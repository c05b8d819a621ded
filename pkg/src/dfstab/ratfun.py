"""Rational functions in x over Q, with local data at points and at infinity."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .exactalg import (
    ONE,
    UNVERIFIED_BLOCK,
    ZERO,
    Factorization,
    Number,
    Poly,
    inverse_mod,
    norm_polynomial,
    poly_divmod,
    poly_gcd,
    poly_xgcd,
    rational_roots,
    refine_factors,
    squarefree_factor,
)


class RatFun:
    """Reduced quotient num/den with den monic; zero is 0/1."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Poly | Number = ZERO, den: Poly | Number = ONE, *, reduced: bool = False):
        if not isinstance(num, Poly):
            num = Poly.constant(num)
        if not isinstance(den, Poly):
            den = Poly.constant(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            num, den = ZERO, ONE
        elif not reduced:
            if den.degree > 0:
                g = poly_gcd(num, den)
                if g.degree > 0:
                    num = num.exquo(g)
                    den = den.exquo(g)
            lc = den.lc
            if lc != 1:
                num = num * (1 / lc)
                den = den.monic()
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def of(cls, v: RatFun | Poly | Number) -> RatFun:
        if isinstance(v, RatFun):
            return v
        return cls(v)

    # -- predicates ----------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def is_constant(self) -> bool:
        return self.den.degree == 0 and self.num.degree <= 0

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.coeff(0)

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other: RatFun | Poly | Number) -> RatFun:
        o = RatFun.of(other)
        if self.den == o.den:
            return RatFun(self.num + o.num, self.den)
        if self.den.degree == 0:
            return RatFun(self.num * o.den + o.num, o.den, reduced=True)
        if o.den.degree == 0:
            return RatFun(self.num + o.num * self.den, self.den, reduced=True)
        g = poly_gcd(self.den, o.den)
        if g.degree == 0:
            return RatFun(self.num * o.den + o.num * self.den, self.den * o.den)
        a, b = self.den.exquo(g), o.den.exquo(g)
        return RatFun(self.num * b + o.num * a, a * b * g)

    __radd__ = __add__

    def __neg__(self) -> RatFun:
        return RatFun(-self.num, self.den, reduced=True)

    def __sub__(self, other: RatFun | Poly | Number) -> RatFun:
        return self + (-RatFun.of(other))

    def __rsub__(self, other: RatFun | Poly | Number) -> RatFun:
        return RatFun.of(other) - self

    def __mul__(self, other: RatFun | Poly | Number) -> RatFun:
        o = RatFun.of(other)
        if self.is_zero() or o.is_zero():
            return RatFun()
        if o.is_constant():
            return RatFun(self.num * o.constant_value(), self.den, reduced=True)
        if self.is_constant():
            return RatFun(o.num * self.constant_value(), o.den, reduced=True)
        # cross-cancel before multiplying
        g1 = poly_gcd(self.num, o.den)
        g2 = poly_gcd(o.num, self.den)
        num = self.num.exquo(g1) * o.num.exquo(g2)
        den = self.den.exquo(g2) * o.den.exquo(g1)
        return RatFun(num, den, reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> RatFun:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFun(self.den, self.num, reduced=True) if self.num.lc == 1 else RatFun(self.den, self.num)

    def __truediv__(self, other: RatFun | Poly | Number) -> RatFun:
        return self * RatFun.of(other).inverse()

    def __rtruediv__(self, other: RatFun | Poly | Number) -> RatFun:
        return RatFun.of(other) * self.inverse()

    def __pow__(self, k: int) -> RatFun:
        if k < 0:
            return self.inverse() ** (-k)
        return RatFun(self.num**k, self.den**k, reduced=True)

    def derivative(self) -> RatFun:
        if self.den.degree == 0:
            return RatFun(self.num.derivative(), ONE, reduced=True)
        n, d = self.num, self.den
        return RatFun(n.derivative() * d - n * d.derivative(), d * d)

    def __call__(self, v: Number) -> Fraction:
        dv = self.den(v)
        if dv == 0:
            raise ZeroDivisionError(f"pole at {v}")
        return self.num(v) / dv

    # -- protocol ------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, RatFun):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (Poly, int, Fraction)):
            return self == RatFun.of(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(("RatFun", self.num, self.den))
        return self._hash

    def __repr__(self) -> str:
        return f"RatFun({self.to_str()!r})"

    def __str__(self) -> str:
        return self.to_str()

    def to_str(self) -> str:
        if self.den.degree == 0:
            return self.num.to_str()
        num = self.num.to_str()
        if sum(1 for c in self.num.coeffs if c) > 1:
            num = f"({num})"
        return f"{num}/({self.den.to_str()})"


RatLike = Union[RatFun, Poly, int, Fraction]


def _nonzero(f: RatFun) -> None:
    if f.is_zero():
        raise ValueError("local data of the zero rational function")


def order_at(f: RatFun, c: Number) -> int:
    """Exponent of the lowest Laurent term of f at x = c."""
    _nonzero(f)
    return f.num.shift(c).valuation() - f.den.shift(c).valuation()


def laurent_coefficients(f: RatFun, c: Number, upto: int) -> dict[int, Fraction]:
    """Laurent coefficients a_k of f at c for order_at(f, c) <= k <= upto."""
    _nonzero(f)
    n = f.num.shift(c)
    d = f.den.shift(c)
    vd = d.valuation()
    vn = n.valuation()
    d = Poly(d.coeffs[vd:])
    start = vn - vd
    count = upto - start + 1
    if count <= 0:
        return {}
    # power series division of n / d, shifted by -vd
    ncs = [n.coeff(vn + i) for i in range(count)]
    dcs = [d.coeff(i) for i in range(count)]
    out: list[Fraction] = []
    inv0 = 1 / dcs[0]
    for i in range(count):
        acc = ncs[i] - sum((dcs[j] * out[i - j] for j in range(1, i + 1)), Fraction(0))
        out.append(acc * inv0)
    return {start + i: v for i, v in enumerate(out)}


def residue_at(f: RatFun, c: Number) -> Fraction:
    """Coefficient of (x - c)^(-1) in the Laurent expansion at c."""
    _nonzero(f)
    if f.den(c) != 0:
        return Fraction(0)
    return laurent_coefficients(f, c, -1).get(-1, Fraction(0))


def order_at_infinity(f: RatFun) -> int:
    _nonzero(f)
    return f.den.degree - f.num.degree


def residue_at_infinity(f: RatFun) -> Fraction:
    """Minus the coefficient of x^(-1) in the expansion of f at infinity."""
    _nonzero(f)
    rem = poly_divmod(f.num, f.den)[1]
    if rem.degree == f.den.degree - 1 and not rem.is_zero():
        return -rem.lc
    return Fraction(0)


@dataclass(frozen=True)
class PoleProfile:
    """Simple poles with negative integer residue, and their product Delta."""

    simple_neg_int_poles: tuple[tuple[Poly, int], ...]
    delta: Poly
    s_count: int
    warnings: tuple[str, ...] = field(default=())


def _residue_poly(f: RatFun, block: Poly) -> Poly:
    # residue at every root c of a simple-pole block, as an element of Q[x]/(block)
    return (f.num * inverse_mod(f.den.derivative(), block)) % block


def pole_profile(f: RatFun, cap: int | None = None) -> PoleProfile:
    if f.is_zero() or f.den.degree == 0:
        return PoleProfile((), ONE, 0)
    simple = [fc for fc in squarefree_factor(f.den).factors if fc.multiplicity == 1]
    if not simple:
        return PoleProfile((), ONE, 0)
    blocks = refine_factors(Factorization(Fraction(1), tuple(simple)), cap).factors
    found: list[tuple[Poly, int]] = []
    warnings: list[str] = []
    for blk in blocks:
        p = blk.poly
        if blk.certainty == UNVERIFIED_BLOCK:
            warnings.append(
                f"block {p} of degree {p.degree} is not certified irreducible; "
                "its residues were resolved in Q[x]/(block) through norm polynomials"
            )
        r = _residue_poly(f, p)
        if r.degree <= 0:
            v = r.coeff(0)
            if v < 0 and v.denominator == 1:
                found.append((p, int(v)))
            continue
        # non-constant residue: only a reducible block can still carry
        # rational residues; read them off the characteristic polynomial
        chi = norm_polynomial(lambda z: Poly.constant(z) - r, p, p.degree)
        for val, _ in rational_roots(chi):
            if val < 0 and val.denominator == 1:
                g = poly_gcd(p, r - Poly.constant(val))
                if g.degree > 0:
                    found.append((g, int(val)))
    found.sort(key=lambda t: (t[0].degree, t[0].coeffs))
    delta = ONE
    for p, res in found:
        delta = delta * p ** (-res)
    return PoleProfile(tuple(found), delta, sum(p.degree for p, _ in found), tuple(warnings))


def delta_poly(f: RatFun) -> Poly:
    return pole_profile(f).delta


def _ext_euclid_solve(a: Poly, b: Poly, c: Poly) -> tuple[Poly, Poly]:
    """Solve s*a + t*b = c with deg s < deg b, assuming gcd(a, b) = 1."""
    g, s, t = poly_xgcd(a, b)
    if g.degree > 0:
        raise ArithmeticError("Hermite reduction: non-coprime arguments")
    q, s2 = poly_divmod(s * c, b)
    t2 = t * c + q * a
    return s2, t2


def _integrate_poly(p: Poly) -> Poly:
    return Poly([0] + [c / (i + 1) for i, c in enumerate(p.coeffs)])


def hermite_reduce(f: RatFun) -> tuple[RatFun, RatFun]:
    """Return (g, h) with f = g' + h, den(h) square-free, h proper."""
    if f.is_zero():
        return RatFun(), RatFun()
    quo, a = poly_divmod(f.num, f.den)
    g = RatFun(_integrate_poly(quo))
    d = f.den
    dm = poly_gcd(d, d.derivative())
    ds = d.exquo(dm)
    while dm.degree > 0:
        dm2 = poly_gcd(dm, dm.derivative())
        dms = dm.exquo(dm2)
        lhs = -(ds * dm.derivative()).exquo(dm)
        b, c = _ext_euclid_solve(lhs, dms, a)
        a = c - (b.derivative() * ds).exquo(dms)
        g = g + RatFun(b, dm)
        dm = dm2
    return g, RatFun(a, ds)


def is_rationally_integrable(f: RatFun) -> bool:
    return hermite_reduce(f)[1].is_zero()
