import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from chainfid.model import (
    HBAR,
    K_BOLTZMANN,
    UNIT_AT_ZERO,
    ChainSpec,
    FidSeries,
    ThermalSpec,
    TimeGrid,
    ValidationError,
    beta_from_physical,
    make_chain,
)


def test_make_chain_identity():
    c = make_chain(2, 1.0)
    assert (c.n_spins, c.coupling) == (2, 1.0)


def test_make_chain_fluorapatite_coupling():
    c = make_chain(9, 15.5e3)
    assert c.n_spins == 9 and c.coupling == 15500.0


@pytest.mark.parametrize(
    "n, d, field",
    [(0, 1.0, "n_spins"), (-3, 1.0, "n_spins"), (2.5, 1.0, "n_spins"), (3, 0.0, "coupling"),
     (3, -1.0, "coupling"), (3, math.nan, "coupling"), (3, math.inf, "coupling")],
)
def test_make_chain_rejects(n, d, field):
    with pytest.raises(ValidationError) as err:
        make_chain(n, d)
    assert err.value.field == field
    assert field in str(err.value)


def test_chain_is_frozen():
    c = make_chain(3, 1.0)
    with pytest.raises(AttributeError):
        c.n_spins = 4


def test_time_grid_rule():
    g = TimeGrid(0.5, 0.25, 5)
    np.testing.assert_array_equal(g.times, 0.5 + np.arange(5) * 0.25)


def test_time_grid_span():
    g = TimeGrid.span(1.0, 11)
    assert g.count == 11 and g.times[0] == 0.0
    assert g.times[-1] == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("kwargs", [dict(start=0, step=0, count=3), dict(start=0, step=-1, count=3),
                                    dict(start=0, step=1, count=0)])
def test_time_grid_rejects(kwargs):
    with pytest.raises(ValidationError):
        TimeGrid(**kwargs)


def test_fid_series_validation():
    with pytest.raises(ValidationError):
        FidSeries([0.0, 0.0], [1.0, 1.0])
    with pytest.raises(ValidationError):
        FidSeries([0.0, 1.0], [1.0])


def test_fid_series_normalize():
    s = FidSeries([0.0, 1.0], [4.0, 2.0], amplitude_at_zero=4.0)
    n = s.normalized()
    assert n.normalization == UNIT_AT_ZERO
    assert n.values[0] == 1.0 and n.values[1] == 0.5
    assert n.normalized() is n


def test_fid_series_immutable():
    s = FidSeries([0.0, 1.0], [1.0, 2.0])
    with pytest.raises(ValueError):
        s.values[0] = 5.0


def test_beta_ratio_definition():
    temp = 3.7
    omega = K_BOLTZMANN * temp / HBAR
    assert beta_from_physical(omega, temp).beta == pytest.approx(1.0, rel=1e-15)


def test_beta_room_temperature():
    # hbar * 2pi * 376.6 MHz / (k_B * 300 K)
    th = beta_from_physical(2 * math.pi * 376.6e6, 300.0)
    assert th.beta == pytest.approx(6.02464980107431e-05, rel=1e-12)
    assert th.beta == pytest.approx(6.02e-5, rel=1e-3)


def test_beta_millikelvin():
    th = beta_from_physical(2 * math.pi * 376.6e6, 0.01)
    assert th.beta == pytest.approx(1.807394940322293, rel=1e-12)


@pytest.mark.parametrize("omega, temp", [(0, 1), (-1, 1), (1, 0), (1, -5)])
def test_beta_rejects(omega, temp):
    with pytest.raises(ValidationError):
        beta_from_physical(omega, temp)


def test_thermal_spec_rejects():
    with pytest.raises(ValidationError):
        ThermalSpec(0.0)


@given(st.floats(1e3, 1e10), st.floats(1e-3, 1e3), st.floats(1.01, 10))
def test_beta_monotone(omega, temp, factor):
    b = beta_from_physical(omega, temp).beta
    assert beta_from_physical(omega * factor, temp).beta > b
    assert beta_from_physical(omega, temp * factor).beta < b
