"""The ring of linear differential operators with rational function coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable

from .exactalg import ONE, Number, Poly, falling_factorial, format_rat, poly_lcm
from .ratfun import RatFun, RatLike, laurent_coefficients, order_at


class OreOp:
    """L = sum a_i D^i with a_i in Q(x), where D*f = f*D + f'.

    Coefficients are stored lowest order first; the zero operator has no
    coefficients and order -1.
    """

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable[RatLike] = ()):
        cs = [RatFun.of(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs: tuple[RatFun, ...] = tuple(cs)
        self._hash = None

    @classmethod
    def D(cls) -> OreOp:
        return cls((0, 1))

    @classmethod
    def scalar(cls, f: RatLike) -> OreOp:
        return cls((f,))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> RatFun:
        if not self.coeffs:
            raise ValueError("leading coefficient of the zero operator")
        return self.coeffs[-1]

    def coeff(self, i: int) -> RatFun:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else RatFun()

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def monic(self) -> OreOp:
        if self.is_monic():
            return self
        inv = self.lc.inverse()
        return OreOp(c * inv for c in self.coeffs)

    def has_polynomial_coeffs(self) -> bool:
        return all(c.is_polynomial() for c in self.coeffs)

    def poly_coeffs(self) -> list[Poly]:
        if not self.has_polynomial_coeffs():
            raise ValueError("operator has non-polynomial coefficients; clear denominators first")
        return [c.num for c in self.coeffs]

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other: OreOp | RatLike) -> OreOp:
        if not isinstance(other, OreOp):
            other = OreOp.scalar(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return OreOp(self.coeff(i) + other.coeff(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> OreOp:
        return OreOp(-c for c in self.coeffs)

    def __sub__(self, other: OreOp | RatLike) -> OreOp:
        if not isinstance(other, OreOp):
            other = OreOp.scalar(other)
        return self + (-other)

    def __rsub__(self, other: RatLike) -> OreOp:
        return OreOp.scalar(other) - self

    def __mul__(self, other: OreOp | RatLike) -> OreOp:
        if not isinstance(other, OreOp):
            other = OreOp.scalar(other)
        return ore_mul(self, other)

    def __rmul__(self, other: RatLike) -> OreOp:
        return ore_mul(OreOp.scalar(other), self)

    def __pow__(self, k: int) -> OreOp:
        if k < 0:
            raise ValueError("negative operator power")
        result = OreOp.scalar(1)
        for _ in range(k):
            result = ore_mul(result, self)
        return result

    def __call__(self, f: RatLike) -> RatFun:
        return apply(self, RatFun.of(f))

    # -- protocol ------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, OreOp):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(("OreOp", self.coeffs))
        return self._hash

    def __repr__(self) -> str:
        return f"OreOp({self.to_str()!r})"

    def __str__(self) -> str:
        return self.to_str()

    def to_str(self) -> str:
        """Render in the operator input grammar."""
        terms: list[str] = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c.is_zero():
                continue
            terms.append(_term_str(c, i))
        if not terms:
            return "0"
        out = terms[0]
        for t in terms[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out


def _term_str(c: RatFun, i: int) -> str:
    dpart = "" if i == 0 else ("D" if i == 1 else f"D^{i}")
    if c.is_constant():
        v = c.constant_value()
        if not dpart:
            return format_rat(v)
        if v == 1:
            return dpart
        if v == -1:
            return f"-{dpart}"
        return f"{format_rat(v)}*{dpart}"
    body = c.to_str()
    if c.is_polynomial() and sum(1 for v in c.num.coeffs if v) > 1 and dpart:
        body = f"({body})"
    return f"{body}*{dpart}" if dpart else body


def _derivatives(f: RatFun, k: int) -> list[RatFun]:
    out = [f]
    for _ in range(k):
        out.append(out[-1].derivative())
    return out


def ore_mul(a: OreOp, b: OreOp) -> OreOp:
    """Noncommutative product a*b."""
    if a.is_zero() or b.is_zero():
        return OreOp()
    n = a.order
    out = [RatFun()] * (a.order + b.order + 1)
    ders = [_derivatives(bj, n) for bj in b.coeffs]
    for i, ai in enumerate(a.coeffs):
        if ai.is_zero():
            continue
        for j in range(len(b.coeffs)):
            for k in range(i + 1):
                bjk = ders[j][k]
                if bjk.is_zero():
                    continue
                out[i - k + j] = out[i - k + j] + ai * bjk * comb(i, k)
    return OreOp(out)


def adjoint(L: OreOp) -> OreOp:
    """L* = sum (-D)^i a_i."""
    if L.is_zero():
        raise ValueError("adjoint of the zero operator")
    n = L.order
    out = [RatFun()] * (n + 1)
    for i, ai in enumerate(L.coeffs):
        if ai.is_zero():
            continue
        ders = _derivatives(ai, i)
        sign = -1 if i % 2 else 1
        # (-D)^i a = (-1)^i sum_k C(i,k) a^(k) D^(i-k)
        for k in range(i + 1):
            if not ders[k].is_zero():
                out[i - k] = out[i - k] + ders[k] * (sign * comb(i, k))
    return OreOp(out)


def apply(L: OreOp, f: RatLike) -> RatFun:
    """L(f) = sum a_i f^(i)."""
    f = RatFun.of(f)
    acc = RatFun()
    cur = f
    for i, ai in enumerate(L.coeffs):
        if i:
            cur = cur.derivative()
        if not ai.is_zero() and not cur.is_zero():
            acc = acc + ai * cur
    return acc


def clear_denominators(L: OreOp) -> tuple[Poly, OreOp]:
    """(d, d*L) with d the monic lcm of the coefficient denominators."""
    if L.is_zero():
        raise ValueError("clear_denominators of the zero operator")
    d = ONE
    for c in L.coeffs:
        d = poly_lcm(d, c.den)
    return d, OreOp(c * d for c in L.coeffs)


@dataclass(frozen=True)
class InfinityData:
    """P(x^s) = indicial(s) x^(s + sigma) + lower-degree terms."""

    indicial: Poly
    sigma: int


def infinity_data(P: OreOp) -> InfinityData:
    if P.is_zero():
        raise ValueError("infinity data of the zero operator")
    # a_j ~ lc(a_j) x^(deg a_j) at infinity; works for rational coefficients too
    shifts = {}
    for j, a in enumerate(P.coeffs):
        if a.is_zero():
            continue
        shifts[j] = a.num.degree - a.den.degree - j
    sigma = max(shifts.values())
    ind = Poly()
    for j, t in shifts.items():
        if t == sigma:
            ind = ind + falling_factorial(j) * P.coeffs[j].num.lc
    return InfinityData(ind, sigma)


def local_exponent_data(P: OreOp, c: Number) -> tuple[Poly, int]:
    """(e, tau) with P((x-c)^s) = e(s) (x-c)^(s+tau) (1 + O(x-c))."""
    if P.is_zero():
        raise ValueError("indicial polynomial of the zero operator")
    vals = {}
    for j, a in enumerate(P.coeffs):
        if not a.is_zero():
            vals[j] = order_at(a, c) - j
    tau = min(vals.values())
    e = Poly()
    for j, v in vals.items():
        if v == tau:
            lead = laurent_coefficients(P.coeffs[j], c, v + j)[v + j]
            e = e + falling_factorial(j) * lead
    return e, tau


def indicial_at_point(P: OreOp, c: Number) -> Poly:
    return local_exponent_data(P, c)[0]


def d_power(n: int) -> OreOp:
    return OreOp([0] * n + [1])


def from_poly_in_D(p: Poly) -> OreOp:
    """Constant-coefficient operator p(D)."""
    return OreOp(p.coeffs)
