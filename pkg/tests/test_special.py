import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chainfid.special import (
    MAX_ORDER,
    BesselEvalPolicy,
    bessel_cos_identity_residual,
    bessel_j,
    bessel_j_table,
    truncation_order,
)
from oracles import bessel_series, first_j0_zero

FIRST_ZERO = 2.404825557695773  # bisection on the 200-term series oracle


def test_j0_at_zero():
    assert bessel_j(0, 0.0) == 1.0


def test_jn_at_zero():
    assert bessel_j(2, 0.0) == 0.0


def test_first_zero_oracle_frozen():
    assert float(first_j0_zero()) == pytest.approx(FIRST_ZERO, abs=1e-15)


def test_first_zero():
    assert abs(bessel_j(0, FIRST_ZERO)) <= 1e-12


def test_j0_at_five():
    assert bessel_j(0, 5.0) == pytest.approx(-0.1775967713143383, abs=1e-12)


@pytest.mark.parametrize("order", [0, 1, 2, 3, 7, 12, 25, 40, 60])
@pytest.mark.parametrize("x", [0.01, 0.7, 1.99, 2.0, 2.01, 4.5, 9.3, 17.0, 24.99, 25.0, 31.4, 39.0, 40.0])
def test_against_series_oracle(order, x):
    assert abs(bessel_j(order, x) - float(bessel_series(order, x))) <= 1e-12


def test_table_against_series_oracle():
    xs = np.array([0.3, 1.5, 3.3, 12.0, 26.0, 38.5])
    table = bessel_j_table(50, xs)
    ref = np.array([[float(bessel_series(n, x)) for x in xs] for n in range(51)])
    assert np.abs(table - ref).max() <= 1e-12


def test_large_argument_regime():
    # past the series oracle's useful range, cross-check the two internal regimes
    x = np.array([60.0, 153.6, 500.0, 2500.0])
    for n in (0, 1, 5):
        direct = bessel_j(n, x)
        via_table = bessel_j_table(n, x)[n]
        assert np.abs(direct - via_table).max() <= 1e-12


def test_array_input_shape():
    x = np.linspace(0, 30, 12).reshape(3, 4)
    out = bessel_j(1, x)
    assert out.shape == (3, 4)
    assert isinstance(bessel_j(1, 2.0), float)


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_rejects_non_finite(bad):
    with pytest.raises(ValueError):
        bessel_j(0, bad)


@pytest.mark.parametrize("order", [-1, 1.5, MAX_ORDER + 1])
def test_rejects_order(order):
    with pytest.raises(ValueError):
        bessel_j(order, 1.0)


def test_policy_validation():
    with pytest.raises(ValueError):
        BesselEvalPolicy(abs_tolerance=0)
    with pytest.raises(ValueError):
        BesselEvalPolicy(max_terms=8)


def test_identity_residual_at_zero():
    assert bessel_cos_identity_residual(0.0, 1) <= 1e-15


def test_identity_residual_at_ten():
    assert bessel_cos_identity_residual(10.0, 30) < 1e-10


def test_identity_residual_truncated_too_early():
    # oracle value of the l_max = 10 truncation at z = 20 is 0.1029...
    r = bessel_cos_identity_residual(20.0, 10)
    assert r == pytest.approx(0.10292648082375239, rel=1e-9)
    assert r > 1e-1


def test_identity_residual_with_truncation_rule():
    for z in np.linspace(0, 40, 81):
        assert bessel_cos_identity_residual(z, truncation_order(z)) <= 1e-10


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 60), st.floats(0, 200))
def test_bounded(order, x):
    assert abs(bessel_j(order, x)) <= 1.0


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 40), st.floats(0.5, 50))
def test_recurrence(order, x):
    lhs = bessel_j(order - 1, x) + bessel_j(order + 1, x)
    assert abs(lhs - 2 * order / x * bessel_j(order, x)) <= 1e-9


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 30), st.floats(0, 60))
def test_parity(order, x):
    assert bessel_j(order, -x) == pytest.approx((-1) ** order * bessel_j(order, x), abs=1e-15)


def test_j0_even_sampled():
    x = np.linspace(-40, 40, 161)
    np.testing.assert_allclose(bessel_j(0, x), bessel_j(0, -x), atol=0, rtol=0)
