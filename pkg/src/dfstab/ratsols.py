"""Rational solutions of M(y) = p for polynomial right-hand sides.

The scheme is the classical one: a universal denominator U from local
exponents at the singular points, then a polynomial ansatz for the
numerator whose degree is bounded through the indicial data at infinity,
then exact linear algebra.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

from .exactalg import (
    ONE,
    UNVERIFIED_BLOCK,
    Poly,
    current_factor_cap,
    falling_factorial,
    factor,
    integer_roots,
    norm_polynomial,
    poly_gcd,
)
from .linalg import nullspace, solve
from .ore import OreOp, adjoint, apply, clear_denominators, infinity_data, ore_mul
from .ratfun import RatFun


@dataclass(frozen=True)
class SolutionSet:
    particular: RatFun | None
    kernel_basis: tuple[RatFun, ...]
    denominator_bound: Poly
    degree_bound: int
    warnings: tuple[str, ...] = field(default=())

    @property
    def solvable(self) -> bool:
        return self.particular is not None


@dataclass(frozen=True)
class DegreeExistence:
    degree: int
    exists: bool
    witness_p: Poly | None = None
    witness_y: RatFun | None = None


# ---------------------------------------------------------------------------
# local analysis at the finite singularities


def _uniform_blocks(block: Poly, coeffs: list[Poly]) -> list[Poly]:
    """Split a square-free block until every coefficient has the same
    multiplicity at all roots of each piece."""
    work = [block]
    done: list[Poly] = []
    while work:
        blk = work.pop()
        piece = None
        for m in coeffs:
            if m.is_zero():
                continue
            cur = m
            while True:
                g = poly_gcd(blk, cur)
                if g.degree == 0:
                    break
                if g.degree < blk.degree:
                    piece = g
                    break
                cur = cur.exquo(blk)
            if piece is not None:
                break
        if piece is None:
            done.append(blk)
        else:
            work.extend([piece, blk.exquo(piece)])
    return done


def _block_pole_bound(block: Poly, coeffs: list[Poly]) -> int:
    """Largest pole order a rational solution of P(y) = polynomial can have
    at any root of `block` (uniform, square-free, monic)."""
    vals: dict[int, int] = {}
    units: dict[int, Poly] = {}
    for j, m in enumerate(coeffs):
        if m.is_zero():
            continue
        v = 0
        while block.divides(m):
            m = m.exquo(block)
            v += 1
        vals[j] = v - j
        units[j] = m
    tau = min(vals.values())
    top = [j for j, v in vals.items() if v == tau]
    db = block.derivative()
    # leading local coefficient of m_j at a root c is u_j(c) * block'(c)^(v_j);
    # dividing out block'(c)^tau leaves u_j(c) * block'(c)^j
    lead = {j: (units[j] * db**j) % block for j in top}
    if block.degree == 1:
        c = -block.coeffs[0]
        e = Poly()
        for j in top:
            e = e + falling_factorial(j) * lead[j](c)
    else:

        def family(s: int) -> Poly:
            acc = Poly()
            for j in top:
                acc = acc + lead[j] * falling_factorial(j)(s)
            return acc

        e = norm_polynomial(family, block, block.degree * max(top))
    roots = integer_roots(e)
    neg = -min(roots) if roots else 0
    return max(0, tau, neg)


@functools.lru_cache(maxsize=512)
def _universal_denominator(M: OreOp, cap: int) -> tuple[Poly, tuple[str, ...]]:
    _, P = clear_denominators(M)
    coeffs = P.poly_coeffs()
    lc = coeffs[-1]
    U = ONE
    warnings: list[str] = []
    if lc.degree < 1:
        return U, ()
    for fac in factor(lc, cap).factors:
        if fac.certainty == UNVERIFIED_BLOCK:
            warnings.append(
                f"factor {fac.poly} of degree {fac.poly.degree} exceeds the factorization cap {cap}; "
                "analysed as a block through norm polynomials"
            )
        for blk in _uniform_blocks(fac.poly, coeffs):
            m = _block_pole_bound(blk, coeffs)
            if m:
                U = U * blk**m
    return U, tuple(warnings)


def universal_denominator(M: OreOp) -> Poly:
    """Monic U such that den(y) | U for every rational y with M(y) polynomial."""
    if M.is_zero():
        raise ValueError("universal denominator of the zero operator")
    return _universal_denominator(M, current_factor_cap())[0]


# ---------------------------------------------------------------------------
# polynomial ansatz


def _degree_bound(ind: Poly, sigma: int, rhs_degree: int) -> int:
    roots = [r for r in integer_roots(ind) if r >= 0]
    cands = [-1]
    if rhs_degree >= 0:
        cands.append(rhs_degree - sigma)
    if roots:
        cands.append(max(roots))
    return max(cands)


class _PolySystem:
    """Images P(x^j) for a polynomial-coefficient operator, computed lazily."""

    def __init__(self, P: OreOp):
        self.P = P
        self.coeffs = P.poly_coeffs()
        inf = infinity_data(P)
        self.ind = inf.indicial
        self.sigma = inf.sigma
        self._images: dict[int, Poly] = {}

    def image(self, j: int) -> Poly:
        img = self._images.get(j)
        if img is None:
            acc = Poly()
            for i, m in enumerate(self.coeffs):
                if i <= j and not m.is_zero():
                    acc = acc + m * Poly.monomial(j - i, falling_factorial(i)(j))
            self._images[j] = img = acc
        return img

    def bound(self, rhs_degree: int) -> int:
        return _degree_bound(self.ind, self.sigma, rhs_degree)

    def solve(self, rhs: Poly) -> tuple[Poly | None, list[Poly], int]:
        b = self.bound(rhs.degree)
        if b < 0:
            return (Poly() if rhs.is_zero() else None), [], b
        imgs = [self.image(j) for j in range(b + 1)]
        nrows = max([rhs.degree] + [g.degree for g in imgs]) + 1
        rows = [[g.coeff(r) for g in imgs] for r in range(nrows)]
        y, kernel = solve(rows, [rhs.coeff(r) for r in range(nrows)], b + 1)
        part = Poly(y) if y is not None else None
        return part, [Poly(v) for v in kernel], b


def polynomial_solutions(M: OreOp, p: Poly) -> SolutionSet:
    """Polynomial solutions of M(y) = p for M with polynomial coefficients."""
    if M.is_zero():
        raise ValueError("polynomial_solutions of the zero operator")
    system = _PolySystem(M)
    part, kernel, b = system.solve(p)
    return SolutionSet(
        RatFun(part) if part is not None else None,
        tuple(RatFun(k) for k in kernel),
        ONE,
        b,
    )


class _RationalSolver:
    """Solver for M(y) = p with the universal denominator built in."""

    def __init__(self, M: OreOp, cap: int):
        self.M = M
        self.U, self.warnings = _universal_denominator(M, cap)
        d, P = clear_denominators(ore_mul(M, OreOp.scalar(RatFun(ONE, self.U))))
        self.d = d
        self.system = _PolySystem(P)

    def solve(self, p: Poly) -> SolutionSet:
        part, kernel, b = self.system.solve(self.d * p)
        return SolutionSet(
            RatFun(part, self.U) if part is not None else None,
            tuple(RatFun(k, self.U) for k in kernel),
            self.U,
            b,
            self.warnings,
        )

    def exists_degree(self, i: int) -> DegreeExistence:
        sysm = self.system
        dd = self.d.degree
        b = sysm.bound(i + dd)
        nz = max(b + 1, 0)
        imgs = [sysm.image(j) for j in range(nz)]
        rhs_cols = [-(self.d * Poly.monomial(k)) for k in range(i + 1)]
        cols = imgs + rhs_cols
        nrows = max(g.degree for g in cols) + 1
        rows = [[g.coeff(r) for g in cols] for r in range(nrows)]
        target = nz + i
        for v in nullspace(rows, len(cols)):
            if v[target] != 0:
                scale = 1 / v[target]
                z = Poly([c * scale for c in v[:nz]])
                p = Poly([c * scale for c in v[nz:]])
                return DegreeExistence(i, True, p, RatFun(z, self.U))
        return DegreeExistence(i, False)


@functools.lru_cache(maxsize=512)
def _solver(M: OreOp, cap: int) -> _RationalSolver:
    return _RationalSolver(M, cap)


def rational_solutions(M: OreOp, p: Poly) -> SolutionSet:
    """All rational solutions of M(y) = p: particular + span(kernel)."""
    if M.is_zero():
        raise ValueError("rational_solutions of the zero operator")
    return _solver(M, current_factor_cap()).solve(p)


def delta(L: OreOp, p: Poly) -> bool:
    """Whether L*(y) = p has a rational solution."""
    if p.is_zero():
        raise ValueError("delta requires a nonzero polynomial")
    return rational_solutions(adjoint(L), p).solvable


def exists_degree(L: OreOp, i: int) -> DegreeExistence:
    """Decide whether delta(L, p) holds for some p of degree exactly i."""
    if L.is_zero():
        raise ValueError("exists_degree of the zero operator")
    if i < 0:
        raise ValueError("degree must be nonnegative")
    return _solver(adjoint(L), current_factor_cap()).exists_degree(i)


def solver_warnings(L: OreOp) -> tuple[str, ...]:
    return _solver(adjoint(L), current_factor_cap()).warnings


def check_solution(M: OreOp, y: RatFun, p: Poly) -> bool:
    return apply(M, y) == RatFun(p)

