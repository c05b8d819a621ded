import os
import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from dfstab.exactalg import Poly
from dfstab.ore import OreOp
from dfstab.ratfun import RatFun

settings.register_profile(
    "default",
    deadline=None,
    derandomize=True,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("thorough", deadline=None, max_examples=400)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

small_rats = st.fractions(min_value=-5, max_value=5, max_denominator=4)
small_ints = st.integers(min_value=-4, max_value=4)


@st.composite
def polys(draw, max_degree=3, coeffs=small_ints, nonzero=False):
    cs = draw(st.lists(coeffs, min_size=0 if not nonzero else 1, max_size=max_degree + 1))
    p = Poly(cs)
    if nonzero and p.is_zero():
        p = Poly([draw(st.integers(1, 4))])
    return p


@st.composite
def ratfuns(draw, max_degree=2, nonzero=False):
    num = draw(polys(max_degree, nonzero=nonzero))
    den = draw(polys(max_degree, nonzero=True))
    return RatFun(num, den)


@st.composite
def operators(draw, max_order=3, max_degree=3, rational=False, nonzero=True):
    n = draw(st.integers(0 if not nonzero else 0, max_order))
    elem = ratfuns(max_degree=max(1, max_degree - 1)) if rational else polys(max_degree)
    cs = [draw(elem) for _ in range(n)]
    lead = draw(ratfuns(max_degree=1, nonzero=True) if rational else polys(max_degree, nonzero=True))
    return OreOp(cs + [lead])


@pytest.fixture
def rng():
    return random.Random(20240601)
