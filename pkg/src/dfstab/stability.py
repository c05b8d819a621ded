"""Principal integrals, stability indices and their closed forms.

Every claim made here carries its certificate: principal integrals store
the rational solution l and the operator H with l*L + D*H = 1, chains
re-check the identity L*D^n = (I_0 ... I_{n-1}) * L_n, and stability
indices come with per-degree witnesses (p, y) such that L*(y) = p.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .exactalg import ONE, Poly, integer_roots, squarefree_part
from .ore import OreOp, adjoint, apply, clear_denominators, infinity_data, ore_mul
from .ratfun import (
    RatFun,
    order_at_infinity,
    pole_profile,
    residue_at_infinity,
)
from .ratsols import exists_degree, rational_solutions, solver_warnings

DELTA0 = "delta0"
DELTA1 = "delta1"


class InvariantError(RuntimeError):
    """An internal consistency check failed; indicates a bug, not bad input."""


@dataclass(frozen=True)
class ChainStep:
    operator: OreOp
    case: str
    certificate_l: Optional[RatFun] = None
    certificate_H: Optional[OreOp] = None

    def factor_I(self) -> OreOp:
        """The left factor I with L_prev * D = I * operator."""
        if self.case == DELTA0:
            return OreOp.scalar(1)
        l = self.certificate_l
        return OreOp((l.derivative() / l, 1))


@dataclass(frozen=True)
class ChainReport:
    base: OreOp
    steps: tuple[ChainStep, ...]
    orders: tuple[int, ...]
    verified_identity: bool

    @property
    def operators(self) -> list[OreOp]:
        return [self.base] + [s.operator for s in self.steps]


@dataclass(frozen=True)
class SindReport:
    operator: OreOp
    B: int
    missing_degrees: tuple[int, ...]
    sind: int
    witnesses: dict[int, tuple[Poly, RatFun]]
    warnings: tuple[str, ...] = field(default=())


# ---------------------------------------------------------------------------
# principal integrals


def _left_divide_by_D(R: OreOp) -> OreOp:
    """H with D*H = R; raises InvariantError when R is not in D*k<D>."""
    n = R.order
    if n < 0:
        return OreOp()
    h = [RatFun()] * n
    nxt = RatFun()
    for k in range(n, 0, -1):
        cur = R.coeff(k) - nxt.derivative()
        h[k - 1] = cur
        nxt = cur
    tail = R.coeff(0) - (h[0].derivative() if n else RatFun())
    if not tail.is_zero():
        raise InvariantError("left division by D left a nonzero remainder")
    return OreOp(h)


def principal_integral(L: OreOp) -> ChainStep:
    if L.is_zero():
        raise ValueError("principal integral of the zero operator")
    if not L.is_monic():
        raise ValueError("principal integral requires a monic operator")
    sols = rational_solutions(adjoint(L), ONE)
    if sols.particular is None:
        return ChainStep(ore_mul(L, OreOp.D()), DELTA0)
    l = sols.particular
    R = OreOp.scalar(1) - ore_mul(OreOp.scalar(l), L)
    H = _left_divide_by_D(R)
    nxt = ore_mul(OreOp.scalar(l.inverse()), OreOp.scalar(1) - ore_mul(H, OreOp.D()))
    return ChainStep(nxt.monic(), DELTA1, l, H)


def certificate_holds(prev: OreOp, step: ChainStep) -> bool:
    if step.case == DELTA0:
        return step.operator == ore_mul(prev, OreOp.D())
    l, H = step.certificate_l, step.certificate_H
    lhs = ore_mul(OreOp.scalar(l), prev) + ore_mul(OreOp.D(), H)
    if lhs != OreOp.scalar(1):
        return False
    expected = ore_mul(OreOp.scalar(l.inverse()), OreOp.scalar(1) - ore_mul(H, OreOp.D()))
    return expected.monic() == step.operator and step.operator.order == prev.order


def verify_chain_identity(base: OreOp, steps: tuple[ChainStep, ...] | list[ChainStep]) -> bool:
    """Check L*D^n == (I_0 ... I_{n-1}) * L_n for every n along the chain."""
    lhs = base
    prod = OreOp.scalar(1)
    prev = base
    for step in steps:
        if not certificate_holds(prev, step):
            return False
        lhs = ore_mul(lhs, OreOp.D())
        prod = ore_mul(prod, step.factor_I())
        if lhs != ore_mul(prod, step.operator):
            return False
        prev = step.operator
    return True


def principal_chain(L: OreOp, depth: int) -> ChainReport:
    if L.is_zero():
        raise ValueError("principal chain of the zero operator")
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    base = L.monic()
    steps: list[ChainStep] = []
    cur = base
    for _ in range(depth):
        step = principal_integral(cur)
        steps.append(step)
        cur = step.operator
    orders = tuple([base.order] + [s.operator.order for s in steps])
    return ChainReport(base, tuple(steps), orders, verify_chain_identity(base, steps))


# ---------------------------------------------------------------------------
# stability index


def bound_B(L: OreOp) -> int:
    """max{0, max V(ind^{L*}) + 1 + sigma^{L*} + deg d} for monic L.

    L* may have rational coefficients, so its data at infinity is read off
    (dL)* = L* d instead: applying it to x^s is L* applied to
    x^(s + deg d)(1 + O(1/x)), hence ind^{L*}(s) = ind^{(dL)*}(s - deg d)
    and sigma^{L*} = sigma^{(dL)*} - deg d.
    """
    if L.is_zero():
        raise ValueError("bound of the zero operator")
    d, dL = clear_denominators(L.monic())
    inf = infinity_data(adjoint(dL))
    # nonnegative integer roots of ind^{L*} are the roots of ind^{(dL)*} shifted by deg d
    nonneg = [r + d.degree for r in integer_roots(inf.indicial) if r + d.degree >= 0]
    max_v = max(nonneg) if nonneg else -1
    sigma = inf.sigma - d.degree
    return max(0, max_v + 1 + sigma + d.degree)


def sind_exact(L: OreOp) -> SindReport:
    if L.is_zero():
        raise ValueError("stability index of the zero operator")
    L = L.monic()
    B = bound_B(L)
    missing: list[int] = []
    witnesses: dict[int, tuple[Poly, RatFun]] = {}
    for i in range(B + 3):
        res = exists_degree(L, i)
        if res.exists:
            witnesses[i] = (res.witness_p, res.witness_y)
        elif i < B:
            missing.append(i)
        else:
            raise InvariantError(f"no polynomial of degree {i} >= B(L) = {B} lies in the image of L*")
    sind = 1 + max(missing) if missing else 0
    return SindReport(L, B, tuple(missing), sind, witnesses, solver_warnings(L))


def witness_holds(L: OreOp, p: Poly, y: RatFun) -> bool:
    return apply(adjoint(L), y) == RatFun(p)


# ---------------------------------------------------------------------------
# closed forms


def katz_operator(p: Poly, q: Poly) -> OreOp:
    """p(D) + q(x)."""
    coeffs: list = list(p.coeffs) or [0]
    coeffs[0] = RatFun(q) + (p.coeff(0) if p.coeffs else 0)
    return OreOp(coeffs)


def katz_sind(p: Poly, q: Poly) -> int:
    if p.is_zero() or p.degree < 1:
        raise ValueError("p must be a nonconstant polynomial")
    if p.coeff(0) != 0:
        raise ValueError("p must vanish at 0")
    return max(q.degree, 0)


@dataclass(frozen=True)
class FirstOrderBounds:
    lower: int
    upper: int
    exact: Optional[int]
    indicial_upper: int
    warnings: tuple[str, ...] = field(default=())


def _is_int_at_most(v: Fraction, bound: int) -> bool:
    return v.denominator == 1 and v <= bound


def _sind_case_formula(N: int, t: int, nu: Fraction) -> int:
    # shared case analysis of the lower bound and the pole-free exact value
    if t != 1 or not _is_int_at_most(nu, -N):
        return N - min(1, t)
    return int(-nu)


def first_order_sind_bounds(f: RatFun) -> FirstOrderBounds:
    """Bounds on Sind(D + f); they coincide when f has no simple pole with
    negative integer residue."""
    if f.is_zero():
        return FirstOrderBounds(0, 0, 0, 0)
    prof = pole_profile(f)
    t = order_at_infinity(f)
    nu = residue_at_infinity(f)
    f1, f2 = f.num.degree, f.den.degree
    if t != 1:
        upper = max(f1, f2)
    elif not _is_int_at_most(nu, 0):
        upper = f2 - 1
    else:
        upper = int(-nu) + f2
    N = f2 - prof.s_count - prof.delta.degree
    lower = max(0, _sind_case_formula(N, t, nu))
    if not prof.simple_neg_int_poles:
        return FirstOrderBounds(lower, lower, lower, upper, prof.warnings)
    return FirstOrderBounds(lower, upper, None, upper, prof.warnings)


@dataclass(frozen=True)
class FirstOrderVerdict:
    """Stability of D + f with f = -h'/h + g, h = Delta(f).

    form is "zero" (g = 0), "constant" (g = alpha), "pole" (g = beta/(x-c))
    or "other".
    """

    stable: bool
    h: Poly
    form: str
    alpha: Optional[Fraction] = None
    beta: Optional[Fraction] = None
    c: Optional[Fraction] = None
    warnings: tuple[str, ...] = field(default=())


def first_order_stable(f: RatFun) -> FirstOrderVerdict:
    if f.is_zero():
        return FirstOrderVerdict(True, ONE, "zero")
    prof = pole_profile(f)
    h = prof.delta
    g = f + RatFun(h.derivative(), h)
    w = prof.warnings
    if g.is_zero():
        return FirstOrderVerdict(True, h, "zero", warnings=w)
    if g.is_constant():
        return FirstOrderVerdict(True, h, "constant", alpha=g.constant_value(), warnings=w)
    if g.den.degree == 1 and g.num.degree == 0:
        beta = g.num.coeff(0)
        c = -g.den.coeff(0)
        stable = not (beta.denominator == 1 and beta > 0)
        return FirstOrderVerdict(stable, h, "pole", beta=beta, c=c, warnings=w)
    return FirstOrderVerdict(False, h, "other", warnings=w)


def inv_q_operator(q: Poly) -> OreOp:
    """D + q'/q, the monic operator annihilating 1/q."""
    if q.is_zero():
        raise ValueError("q must be nonzero")
    return OreOp((RatFun(q.derivative(), q), 1))


def inv_q_profile(q: Poly, depth: Optional[int] = None) -> list[int]:
    """Orders of the j-th principal integrals of D + q'/q for j = 0..depth.

    depth defaults to deg q + 1, after which the orders stay constant.
    """
    if q.degree < 1:
        raise ValueError("q must be nonconstant")
    n = squarefree_part(q).degree
    N = q.degree
    if depth is None:
        depth = N + 1
    out = []
    for j in range(depth + 1):
        if j <= n - 1:
            out.append(1 + j)
        elif j <= N - 1:
            out.append(n)
        else:
            out.append(1 + n)
    return out
