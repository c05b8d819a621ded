import random
from fractions import Fraction

import pytest
from hypothesis import given

from conftest import operators, ratfuns
from dfstab.exactalg import X, Poly
from dfstab.ore import OreOp
from dfstab.parse import ParseError, parse_operator, parse_poly, parse_poly_in_D, parse_ratfun, tokenize
from dfstab.ratfun import RatFun

D = OreOp.D()


def test_basic_examples():
    assert parse_operator("D^3 - x*D").coeffs == OreOp([0, -X, 0, 1]).coeffs
    assert parse_operator("D*x") == OreOp([1, X])
    L = parse_operator("(x^2+1)*D^2 + (1/2)*D")
    assert L.order == 2 and L.lc == RatFun(X**2 + 1)
    assert L.coeff(1) == RatFun(Fraction(1, 2))


def test_products_are_noncommutative():
    assert parse_operator("x*D") == OreOp([0, X])
    assert parse_operator("D^2*x^2") == OreOp([2, 4 * X, X**2])
    assert parse_operator("(D + x)*(D - x)") == OreOp([-1 - X**2, 0, 1])


def test_division_and_unary_minus():
    assert parse_operator("-1/(2*x) - 1/(2*(x+1))") == OreOp([-RatFun(1, 2 * X) - RatFun(1, 2 * (X + 1))])
    # A/g is A*(1/g), so dividing D on the right still obeys the commutation rule
    assert parse_operator("D/x") == OreOp([-RatFun(1, X**2), RatFun(1, X)])
    assert parse_operator("1/x*D") == OreOp([0, RatFun(1, X)])
    assert parse_operator("--x") == OreOp([X])
    assert parse_operator("x^0") == OreOp([1])


def test_whitespace_ignored():
    assert parse_operator("  D ^ 2 +\tx ") == parse_operator("D^2+x")


def test_helpers():
    assert parse_ratfun("(x+1)/(x^2-1)") == RatFun(1, X - 1)
    assert parse_poly("x^3 + 1") == X**3 + 1
    assert parse_poly_in_D("D^3 + D") == Poly([0, 1, 0, 1])
    for fn, text in [(parse_ratfun, "D + 1"), (parse_poly, "1/x"), (parse_poly_in_D, "x*D")]:
        with pytest.raises(ParseError):
            fn(text)


@pytest.mark.parametrize(
    "text, pos",
    [("D^-1", 2), ("x + ", 4), ("(x", 2), ("x $ 1", 2), ("x)", 1), ("", 0), ("1/D", 2), ("1/(x-x)", 2), ("D^x", 2)],
)
def test_errors_carry_positions(text, pos):
    with pytest.raises(ParseError) as exc:
        parse_operator(text)
    assert exc.value.position == pos
    assert f"position {pos}" in str(exc.value)


def test_negative_exponent_message():
    with pytest.raises(ParseError, match="negative exponent"):
        parse_operator("x^-2")


def test_tokens():
    assert [t.kind for t in tokenize("12*x^3")] == ["int", "*", "x", "^", "int", "end"]


@given(operators(3, 3, rational=True))
def test_printed_operators_reparse(L):
    assert parse_operator(L.to_str()) == L


@given(ratfuns(max_degree=3))
def test_printed_ratfuns_reparse(f):
    assert parse_ratfun(str(f)) == f


# -- random expression corpus -------------------------------------------------
# Expressions are built as source text and as a value at the same time, so
# parsing is checked against an independent evaluation, and then printing the
# parsed operator must give text that parses back to the same operator.

def _rand_expr(rng: random.Random, depth: int) -> tuple[str, OreOp]:
    if depth == 0 or rng.random() < 0.3:
        kind = rng.randrange(4)
        if kind == 0:
            return "x", OreOp([X])
        if kind == 1:
            return "D", D
        if kind == 2:
            n = rng.randint(0, 9)
            return str(n), OreOp.scalar(n)
        a, b = rng.randint(1, 9), rng.randint(1, 5)
        return f"({a}/{b})", OreOp.scalar(Fraction(a, b))
    op = rng.choice("+-*^/n")
    if op == "n":
        s, v = _rand_expr(rng, depth - 1)
        return f"-({s})", -v
    if op == "^":
        s, v = _rand_expr(rng, depth - 1)
        k = rng.randint(0, 3)
        return f"({s})^{k}", v**k
    if op == "/":
        s, v = _rand_expr(rng, depth - 1)
        c = rng.randint(-3, 3)
        return f"({s})/(x - {c})" if c >= 0 else f"({s})/(x + {-c})", v * OreOp.scalar(RatFun(1, X - c))
    (s1, v1), (s2, v2) = _rand_expr(rng, depth - 1), _rand_expr(rng, depth - 1)
    if op == "+":
        return f"({s1}) + ({s2})", v1 + v2
    if op == "-":
        return f"({s1}) - ({s2})", v1 - v2
    return f"({s1})*({s2})", v1 * v2


def test_random_expression_round_trip(rng):
    for _ in range(500):
        text, value = _rand_expr(rng, 3)
        L = parse_operator(text)
        assert L == value, text
        assert parse_operator(L.to_str()) == L, text
