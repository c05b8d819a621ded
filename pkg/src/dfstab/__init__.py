"""Exact operator algebra over Q(x) and stability indices of D-finite functions."""

from .exactalg import Poly, factor_cap
from .ore import OreOp, adjoint, apply, ore_mul
from .parse import ParseError, parse_operator, parse_poly, parse_ratfun
from .ratfun import RatFun
from .ratsols import delta, exists_degree, rational_solutions
from .stability import (
    bound_B,
    first_order_sind_bounds,
    first_order_stable,
    inv_q_profile,
    katz_sind,
    principal_chain,
    principal_integral,
    sind_exact,
)

__all__ = [
    "OreOp",
    "ParseError",
    "Poly",
    "RatFun",
    "adjoint",
    "apply",
    "bound_B",
    "delta",
    "exists_degree",
    "factor_cap",
    "first_order_sind_bounds",
    "first_order_stable",
    "inv_q_profile",
    "katz_sind",
    "ore_mul",
    "parse_operator",
    "parse_poly",
    "parse_ratfun",
    "principal_chain",
    "principal_integral",
    "rational_solutions",
    "sind_exact",
]
