"""Analytic FID expressions for the nearest-neighbour double-quantum chain.

With ``z = 2*D*t``:

* ``series_eq13``:   N 2^(N-2) J0(z) - 2^(N-2) sum_{l>=1} (-1)^l J_2l(z)
* ``finite_n_eq15``: (2N+1) 2^(N-3) J0(z) - 2^(N-3) cos z
* ``infinite_j0_eq16``: J0(z), already normalized

The first two are raw and are large-N forms (they come after replacing the
mode sum by an integral), so they are not exact for small chains. The exact
finite-N result lives in :mod:`chainfid.fermion`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .model import RAW, UNIT_AT_ZERO, ChainSpec, ComputeGuardError, FidSeries, ThermalSpec, TimeGrid
from .special import DEFAULT_POLICY, BesselEvalPolicy, bessel_j, bessel_j_table, truncation_order

MAX_RAW_SPINS = 60


class ClosedFormVariant(enum.Enum):
    SERIES_EQ13 = "series_eq13"
    FINITE_N_EQ15 = "finite_n_eq15"
    INFINITE_J0_EQ16 = "infinite_j0_eq16"


def fid_infinite(chain: ChainSpec, grid: TimeGrid, policy: BesselEvalPolicy = DEFAULT_POLICY) -> FidSeries:
    """Normalized thermodynamic-limit FID, J0(2 D t)."""
    t = grid.times
    values = bessel_j(0, 2.0 * chain.coupling * t, policy)
    return FidSeries(t, np.atleast_1d(values), UNIT_AT_ZERO, 1.0, "j0")


def _pow2(exponent: int) -> float:
    # exact power of two; no overflow for |exponent| < 1024
    return math.ldexp(1.0, exponent)


def _series_sum(z: np.ndarray, policy: BesselEvalPolicy) -> np.ndarray:
    """sum_{l>=1} (-1)^l J_2l(z), truncated at ceil(z/2) + 20 terms."""
    out = np.empty_like(z)
    # one recurrence pass per point; l_max depends on |z|
    for i, zi in enumerate(z):
        l_max = truncation_order(zi)
        evens = bessel_j_table(2 * l_max, zi, policy)[2::2]
        signs = np.where(np.arange(1, l_max + 1) % 2, -1.0, 1.0)
        out[i] = math.fsum(signs * evens)
    return out


def fid_closed_finite(
    chain: ChainSpec,
    grid: TimeGrid,
    variant: ClosedFormVariant = ClosedFormVariant.FINITE_N_EQ15,
    policy: BesselEvalPolicy = DEFAULT_POLICY,
) -> FidSeries:
    """Raw closed-form FID for an N-spin chain; call ``.normalized()`` to get G/G(0)."""
    variant = ClosedFormVariant(variant)
    if variant is ClosedFormVariant.INFINITE_J0_EQ16:
        return fid_infinite(chain, grid, policy)
    n = chain.n_spins
    if n > MAX_RAW_SPINS:
        raise ComputeGuardError(
            f"raw closed forms carry 2^N prefactors and are limited to N <= {MAX_RAW_SPINS}; "
            "use the normalized J0 form for longer chains"
        )
    t = grid.times
    z = 2.0 * chain.coupling * t
    j0 = np.atleast_1d(bessel_j(0, z, policy))
    if variant is ClosedFormVariant.SERIES_EQ13:
        values = n * _pow2(n - 2) * j0 - _pow2(n - 2) * _series_sum(z, policy)
    else:
        values = (2 * n + 1) * _pow2(n - 3) * j0 - _pow2(n - 3) * np.cos(z)
    return FidSeries(t, values, RAW, n * _pow2(n - 2), variant.value)


@dataclass(frozen=True)
class SecondMoment:
    limit: float  # 2 D^2
    finite_n: float  # 2 D^2 (1 - 1/N); derived from the mode sum, oracle-checked
    n_spins: int


def second_moment(chain: ChainSpec) -> SecondMoment:
    d2 = chain.coupling**2
    return SecondMoment(2.0 * d2, 2.0 * d2 * (1.0 - 1.0 / chain.n_spins), chain.n_spins)


def thermal_amplitude(chain: ChainSpec, thermal: ThermalSpec) -> float:
    """G(0) of the low-temperature FID, (N/2) tanh(beta/2)."""
    return 0.5 * chain.n_spins * math.tanh(0.5 * thermal.beta)


def fid_thermal_closed(chain: ChainSpec, thermal: ThermalSpec, grid: TimeGrid,
                       policy: BesselEvalPolicy = DEFAULT_POLICY) -> FidSeries:
    """Raw low-temperature FID in the long-chain limit: amplitude times J0(2 D t)."""
    amp = thermal_amplitude(chain, thermal)
    base = fid_infinite(chain, grid, policy)
    return FidSeries(base.times, amp * base.values, RAW, amp, "thermal_j0")
