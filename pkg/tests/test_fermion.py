import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chainfid import TimeGrid, make_chain
from chainfid.closed_form import fid_infinite, second_moment
from chainfid.fermion import (
    bogoliubov_weights,
    fid_free_fermion,
    fid_sin_convention,
    fid_thermal_free_fermion,
    mode_second_moment,
    mode_set,
)
from chainfid.oracle import fid_oracle, thermal_fid_oracle
from chainfid.model import ThermalSpec


def test_mode_set_single_spin():
    m = mode_set(make_chain(1, 3.0))
    assert m.momenta[0] == pytest.approx(math.pi / 2)
    assert m.energies[0] == 0.0


def test_mode_set_two_spins():
    m = mode_set(make_chain(2, 2.0))
    np.testing.assert_allclose(m.momenta, [math.pi / 3, 2 * math.pi / 3])
    np.testing.assert_allclose(m.energies, [1.0, -1.0], rtol=1e-15)


def test_mode_set_three_spins():
    m = mode_set(make_chain(3, 1.0))
    np.testing.assert_allclose(m.energies, [1 / math.sqrt(2), 0.0, -1 / math.sqrt(2)], atol=1e-15)


@pytest.mark.parametrize("n", [1, 2, 5, 16, 101])
def test_mode_set_invariants(n):
    m = mode_set(make_chain(n, 1.3))
    assert len(m.momenta) == n
    assert np.all(np.diff(m.momenta) > 0)
    assert 0 < m.momenta[0] and m.momenta[-1] < math.pi
    np.testing.assert_array_equal(m.energies, -m.energies[::-1])


def test_single_spin_constant():
    s = fid_free_fermion(make_chain(1, 5.0), TimeGrid.span(10.0, 11)).normalized()
    assert np.all(s.values == 1.0)


def test_two_spins_cosine():
    d = 2.5
    g = TimeGrid.span(6.0, 61)
    s = fid_free_fermion(make_chain(2, d), g).normalized()
    np.testing.assert_allclose(s.values, np.cos(d * g.times), atol=1e-14)


def test_three_spins():
    d = 1.0
    g = TimeGrid.span(8.0, 41)
    s = fid_free_fermion(make_chain(3, d), g).normalized()
    expected = (2 * np.cos(math.sqrt(2) * d * g.times) + 1) / 3
    np.testing.assert_allclose(s.values, expected, atol=1e-14)


def test_raw_amplitude():
    s = fid_free_fermion(make_chain(7, 1.0), TimeGrid(0.0, 1.0, 2))
    assert s.amplitude_at_zero == 3.5
    assert s.values[0] == 3.5


def test_two_spin_period():
    d = 1.7
    g = TimeGrid(0.3, 0.1, 20)
    shifted = TimeGrid(0.3 + 2 * math.pi / d, 0.1, 20)
    a = fid_free_fermion(make_chain(2, d), g).values
    b = fid_free_fermion(make_chain(2, d), shifted).values
    np.testing.assert_allclose(a, b, atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 200), st.floats(0.01, 20))
def test_even_in_time(n, t):
    chain = make_chain(n, 1.0)
    g = TimeGrid(-t, 2 * t, 2)
    v = fid_free_fermion(chain, g).values
    assert v[0] == pytest.approx(v[1], abs=1e-12)


@pytest.mark.parametrize("n", [2, 3, 7, 50, 1000])
def test_mode_second_moment(n):
    chain = make_chain(n, 2.0)
    assert mode_second_moment(chain) == pytest.approx(second_moment(chain).finite_n, rel=1e-12)


@pytest.mark.parametrize("n", range(1, 9))
def test_matches_oracle(n):
    chain = make_chain(n, 1.0)
    g = TimeGrid.span(8.0, 32)
    a = fid_free_fermion(chain, g).normalized().values
    b = fid_oracle(chain, g).normalized().values
    assert np.max(np.abs(a - b)) <= 1e-10


def test_sin_convention_rejected_by_oracle():
    # the sin k argument makes a single spin oscillate, which the oracle forbids
    g = TimeGrid.span(4.0, 16)
    for n in (1, 3, 4):
        chain = make_chain(n, 1.0)
        wrong = fid_sin_convention(chain, g).normalized().values
        ref = fid_oracle(chain, g).normalized().values
        assert np.max(np.abs(wrong - ref)) > 0.1


def test_sin_convention_same_limit():
    chain = make_chain(4000, 1.0)
    g = TimeGrid.span(10.0, 201)
    a = fid_sin_convention(chain, g).normalized().values
    assert np.max(np.abs(a - fid_infinite(chain, g).values)) < 5e-3


def test_large_n_limit():
    chain = make_chain(4000, 1.0)
    g = TimeGrid.span(10.0, 1001)
    s = fid_free_fermion(chain, g).normalized().values
    assert np.max(np.abs(s - fid_infinite(chain, g).values)) <= 5e-3


def test_finite_n_correction():
    # trapezoid rule on the J0 integral: exact finite-N FID = J0 + (J0 - cos z)/N
    n = 500
    g = TimeGrid.span(10.0, 201)
    chain = make_chain(n, 1.0)
    j0 = fid_infinite(chain, g).values
    z = 2 * g.times
    s = fid_free_fermion(chain, g).normalized().values
    np.testing.assert_allclose(s, j0 + (j0 - np.cos(z)) / n, atol=1e-13)


def test_bogoliubov_at_zero():
    w = bogoliubov_weights(make_chain(6, 1.0), 0.0)
    assert np.all(w.u == 0) and np.all(w.v == 1)
    assert np.all(w.w == -1)


@settings(max_examples=50)
@given(st.integers(1, 50), st.floats(-100, 100))
def test_bogoliubov_unitarity(n, t):
    w = bogoliubov_weights(make_chain(n, 1.0), t)
    np.testing.assert_allclose(w.u**2 + w.v**2, 1.0, atol=1e-15)


def test_bogoliubov_two_spins():
    w = bogoliubov_weights(make_chain(2, 1.0), math.pi)
    assert w.w[0] == pytest.approx(-math.cos(math.pi * math.sqrt(3)), abs=1e-14)


@pytest.mark.parametrize("n", [2, 5, 8])
@pytest.mark.parametrize("beta", [0.01, 1.0, 5.0])
def test_thermal_matches_oracle(n, beta):
    chain = make_chain(n, 1.0)
    g = TimeGrid.span(6.0, 13)
    a = fid_thermal_free_fermion(chain, beta, g).values
    b = thermal_fid_oracle(chain, ThermalSpec(beta), g).values
    assert np.max(np.abs(a - b)) <= 1e-12


def test_chunked_evaluation_consistent():
    chain = make_chain(3000, 1.0)
    g = TimeGrid.span(10.0, 2000)
    full = fid_free_fermion(chain, g).values
    part = fid_free_fermion(chain, TimeGrid(g.times[1500], g.step, 500)).values
    # raw values are O(N); the two grids round t slightly differently
    np.testing.assert_allclose(full[1500:], part, rtol=0, atol=1e-9)


def test_compute_fid_dispatch():
    from chainfid import ComputeGuardError, compute_fid

    g = TimeGrid.span(5.0, 11)
    small = make_chain(6, 1.0)
    np.testing.assert_allclose(compute_fid(small, g).values, compute_fid(small, g, "oracle").values, atol=1e-12)
    big = make_chain(40, 1.0)
    assert compute_fid(big, g).values[0] == 1.0
    with pytest.raises(ComputeGuardError):
        compute_fid(big, g, "oracle")
    with pytest.raises(ValueError):
        compute_fid(small, g, "nope")
