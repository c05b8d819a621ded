from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import polys
from dfstab.exactalg import ONE, X, Poly
from dfstab.ore import OreOp, adjoint, apply, clear_denominators
from dfstab.ratfun import RatFun, pole_profile
from dfstab.ratsols import (
    delta,
    exists_degree,
    polynomial_solutions,
    rational_solutions,
    universal_denominator,
)
from dfstab.stability import bound_B
from oracles import brute_image_degree, brute_rational_solvable

D = OreOp.D()
airy = OreOp([0, -X, 0, 1])


def first_order(f: RatFun) -> OreOp:
    return OreOp([f, 1])


def inv_q(q: Poly) -> OreOp:
    return first_order(RatFun(q.derivative(), q))


def check(M, sols, p):
    if sols.particular is not None:
        assert apply(M, sols.particular) == RatFun(p)
        assert sols.particular.den.divides(sols.denominator_bound)
    for k in sols.kernel_basis:
        assert apply(M, k).is_zero()
        assert k.den.divides(sols.denominator_bound)


# -- universal denominators ---------------------------------------------------

def test_universal_denominator_examples():
    f = RatFun(-2, X) + RatFun(1, X - 1)
    assert universal_denominator(adjoint(first_order(f))) == X**2 == pole_profile(f).delta
    assert universal_denominator(adjoint(inv_q(X**2 * (X - 1) * (X + 3)))) == ONE
    assert universal_denominator(-D) == ONE


def test_universal_denominator_content_pole():
    # x^2 y' = -1 is solved by 1/x even though the local indicial polynomial is constant
    M = OreOp([0, X**2])
    assert universal_denominator(M) == X
    assert rational_solutions(M, Poly([-1])).particular == RatFun(1, X)


def test_universal_denominator_irreducible_block():
    b = X**2 + 1
    f = RatFun(-3 * b.derivative(), b)
    U = universal_denominator(adjoint(first_order(f)))
    assert U == b**3


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 2)), min_size=1, max_size=3, unique_by=lambda t: t[0]))
def test_first_order_denominator_divides_delta(poles):
    f = RatFun()
    for c, r in poles:
        f = f + RatFun(r, X - c)
    if f.is_zero():
        return
    assert universal_denominator(adjoint(first_order(f))).divides(pole_profile(f).delta)


# -- polynomial and rational solutions -----------------------------------------

def test_polynomial_solutions_examples():
    sols = polynomial_solutions(adjoint(airy), ONE)
    assert sols.particular == RatFun(1)
    sols = polynomial_solutions(adjoint(D - 1), ONE)
    assert sols.particular == RatFun(-1)
    _, P = clear_denominators(-D + OreOp.scalar(RatFun(1, X)))
    assert polynomial_solutions(P, X).particular is None


def test_rational_solutions_examples():
    sols = rational_solutions(adjoint(D), ONE)
    assert sols.particular == RatFun(-X)
    assert sols.kernel_basis == (RatFun(1),)
    assert rational_solutions(adjoint(first_order(RatFun(1, X))), ONE).particular is None


@pytest.mark.parametrize("beta", [Fraction(1, 2), Fraction(-3), Fraction(-7, 3), Fraction(0)])
@pytest.mark.parametrize("s", range(1, 6))
def test_rational_solutions_power_family(beta, s):
    c = 2
    M = adjoint(first_order(RatFun(beta, X - c)))
    p = Poly([beta - s]) * (X - c) ** (s - 1)
    sols = rational_solutions(M, p)
    check(M, sols, p)
    diff = sols.particular - RatFun((X - c) ** s)
    if sols.kernel_basis:
        (k,) = sols.kernel_basis
        # the kernel is spanned by (x - c)^beta for integer beta <= 0
        assert (k * RatFun((X - c) ** int(-beta))).is_constant()
        assert diff.is_zero() or (diff / k).is_constant()
    else:
        assert diff.is_zero()


def test_delta_examples():
    assert delta(airy, ONE)
    assert not delta(first_order(RatFun(1, X)), ONE)
    for c in (1, 2, -5):
        assert not delta(OreOp([X, 0, 1]), Poly([c]))
    with pytest.raises(ValueError):
        delta(airy, Poly())


def test_exists_degree_examples():
    L = inv_q(X**2)
    r = exists_degree(L, 0)
    assert r.exists and r.witness_p.degree == 0
    assert apply(adjoint(L), r.witness_y) == RatFun(r.witness_p)
    assert r.witness_y == RatFun(r.witness_p.lc * X)
    assert not exists_degree(L, 1).exists
    assert not exists_degree(OreOp([X**3 + 1, 0, 1]), 2).exists
    assert exists_degree(OreOp([X**3 + 1, 0, 1]), 3).exists


@st.composite
def small_operators(draw, max_order=2):
    n = draw(st.integers(1, max_order))
    lc = ONE
    for _ in range(draw(st.integers(0, 2))):
        lc = lc * (X - draw(st.integers(-2, 2)))
    cs = [draw(polys(2, coeffs=st.integers(-3, 3))) for _ in range(n)]
    return OreOp(cs + [lc * draw(st.sampled_from([1, 2, -1]))])


@settings(max_examples=40)
@given(small_operators(), polys(3, nonzero=True))
def test_solutions_verify(M, p):
    sols = rational_solutions(M, p)
    check(M, sols, p)


@settings(max_examples=25)
@given(small_operators(), polys(2, nonzero=True), polys(2, nonzero=True))
def test_image_is_a_vector_space(L, p1, p2):
    s1 = rational_solutions(adjoint(L), p1)
    s2 = rational_solutions(adjoint(L), p2)
    if s1.solvable and s2.solvable:
        assert apply(adjoint(L), s1.particular + s2.particular) == RatFun(p1 + p2)


@settings(max_examples=20)
@given(small_operators())
def test_exists_degree_eventually_true(L):
    B = bound_B(L)
    for i in range(B, B + 5):
        r = exists_degree(L, i)
        assert r.exists
        assert r.witness_p.degree == i
        assert apply(adjoint(L), r.witness_y) == RatFun(r.witness_p)


@settings(max_examples=15)
@given(small_operators(max_order=1), st.integers(0, 3))
def test_exists_degree_matches_ansatz(L, i):
    r = exists_degree(L, i)
    if r.exists:
        # a positive answer is certified by its witness
        assert r.witness_p.degree == i
        assert apply(adjoint(L), r.witness_y) == RatFun(r.witness_p)
    else:
        assert not brute_image_degree(L, i, power=6, num_degree=10)


@settings(max_examples=20)
@given(small_operators(), polys(3, nonzero=True))
def test_solvability_matches_brute_force(M, p):
    assert rational_solutions(M, p).solvable == brute_rational_solvable(M, p)
