import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from handplan.cost import CostInput, accepts, cost_array, cost_closed_form, cost_quadrature
from handplan.errors import DivergentIntegral

pos = st.floats(0.01, 10)


def bisect(fn, lo, hi, tol=1e-15):
    flo = fn(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if (fn(mid) > 0) == (flo > 0):
            lo, flo = mid, fn(mid)
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_closed_form_examples():
    assert cost_closed_form(CostInput(1, 1, 1)) == pytest.approx(0.6931471805599453, abs=1e-15)
    assert cost_closed_form(CostInput(1, 2, 0)) == 0.5
    assert cost_closed_form(CostInput(0, 1, 1)) == 0.0


def test_closed_form_divergent_cases():
    assert cost_closed_form(CostInput(1, 0, 1)) == math.inf
    assert cost_closed_form(CostInput(1, 0, 0)) == math.inf
    assert cost_closed_form(CostInput(0, 0, 0)) == 0.0


def test_quadrature_examples():
    assert cost_quadrature(CostInput(1, 1, 1), 1e-10) == pytest.approx(0.6931471806, abs=1e-10)
    assert cost_quadrature(CostInput(3, 2, 0), 1e-10) == pytest.approx(1.5, abs=1e-12)
    assert cost_quadrature(CostInput(2, 1, 3), 1e-10) == pytest.approx(2 / 3 * math.log(4), abs=1e-10)
    assert 2 / 3 * math.log(4) == pytest.approx(0.924196, abs=1e-6)


def test_quadrature_divergent():
    with pytest.raises(DivergentIntegral):
        cost_quadrature(CostInput(1, 0, 2))


def test_accepts_at_bisection_root():
    # root of (1 / e2) ln(1 + e2 / e3) = 1 with e2 = 1
    e3 = bisect(lambda e3: math.log1p(1 / e3) - 1.0, 0.1, 2.0)
    assert e3 == pytest.approx(1 / (math.e - 1), abs=1e-12)
    assert e3 == pytest.approx(0.581977, abs=1e-6)
    assert accepts(CostInput(1, e3, 1), 1e-6)


def test_accepts_examples():
    assert not accepts(CostInput(1, 1, 1), 0.05)
    assert accepts(CostInput(0, 0, 0), 0.05)
    assert accepts(CostInput(0, 0, 0), 1e-12)
    assert not accepts(CostInput(1, 0, 1), 10.0)


def test_cost_array_matches_scalar():
    rng = np.random.default_rng(3)
    d, e3, e2 = rng.uniform(0, 5, (3, 500))
    e2[:50] = 0
    e3[50:60] = 0
    got = cost_array(d, e3, e2)
    want = [cost_closed_form(CostInput(*v)) for v in zip(d, e3, e2)]
    np.testing.assert_allclose(got, want, rtol=1e-14, atol=0)


@given(pos, pos, pos, st.floats(1.01, 3))
def test_monotonicity(d, e3, e2, k):
    base = cost_closed_form(CostInput(d, e3, e2))
    assert cost_closed_form(CostInput(d * k, e3, e2)) > base
    assert cost_closed_form(CostInput(d, e3 * k, e2)) < base
    assert cost_closed_form(CostInput(d, e3, e2 * k)) < base


@given(pos, pos, pos, st.floats(1e-3, 1e3))
def test_scale_invariance(d, e3, e2, lam):
    a = cost_closed_form(CostInput(d, e3, e2))
    b = cost_closed_form(CostInput(d, e3, e2).scaled(lam))
    assert b == pytest.approx(a, rel=1e-12)


@given(pos, pos, pos, st.floats(1e-3, 1e3))
def test_accepts_scale_symmetric(d, e3, e2, lam):
    inp = CostInput(d, e3, e2)
    f = cost_closed_form(inp)
    if abs(abs(f - 1) - 0.05) < 1e-9:
        return  # on the band edge rounding decides
    assert accepts(inp) == accepts(inp.scaled(lam))


def test_closed_form_vs_quadrature_sample():
    rng = np.random.default_rng(11)
    for d, e3, e2 in rng.uniform(0.01, 10, (200, 3)):
        inp = CostInput(d, e3, e2)
        assert abs(cost_closed_form(inp) - cost_quadrature(inp, 1e-10)) <= 1e-9
