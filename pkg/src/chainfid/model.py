"""Shared value types and unit conventions.

Units: the coupling ``D`` is an angular frequency in rad/s and times are SI
seconds, so every phase that appears in the FID formulas is a plain ``D*t``
product. Microseconds only show up at the CSV/CLI boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# CODATA 2018 (both exact in the 2019 SI).
HBAR = 1.054571817e-34  # J s
K_BOLTZMANN = 1.380649e-23  # J / K

RAW = "raw"
UNIT_AT_ZERO = "unit-at-zero"


class ValidationError(ValueError):
    """Bad input value; ``field`` names the offending parameter."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class ComputeGuardError(RuntimeError):
    """Request exceeds what an engine is allowed to compute (memory/overflow)."""


def _finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValidationError(name, f"must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class ChainSpec:
    n_spins: int
    coupling: float  # rad/s

    def __post_init__(self):
        if isinstance(self.n_spins, bool) or int(self.n_spins) != self.n_spins:
            raise ValidationError("n_spins", f"must be an integer, got {self.n_spins!r}")
        if self.n_spins < 1:
            raise ValidationError("n_spins", f"must be >= 1, got {self.n_spins}")
        coupling = _finite("coupling", self.coupling)
        if coupling <= 0:
            raise ValidationError("coupling", f"must be > 0, got {coupling}")
        object.__setattr__(self, "n_spins", int(self.n_spins))
        object.__setattr__(self, "coupling", coupling)


def make_chain(n_spins: int, coupling: float) -> ChainSpec:
    return ChainSpec(n_spins, coupling)


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid ``start + i*step`` for ``i = 0..count-1`` (seconds)."""

    start: float
    step: float
    count: int

    def __post_init__(self):
        _finite("start", self.start)
        if _finite("step", self.step) <= 0:
            raise ValidationError("step", f"must be > 0, got {self.step}")
        if int(self.count) != self.count or self.count < 1:
            raise ValidationError("count", f"must be a positive integer, got {self.count}")
        object.__setattr__(self, "count", int(self.count))

    @classmethod
    def span(cls, t_max: float, points: int, start: float = 0.0) -> "TimeGrid":
        """Grid from ``start`` to ``t_max`` inclusive with ``points`` samples."""
        if int(points) != points or points < 1:
            raise ValidationError("points", f"must be a positive integer, got {points}")
        t_max = _finite("t_max", t_max)
        if points == 1:
            return cls(start, 1.0, 1)
        if t_max <= start:
            raise ValidationError("t_max", f"must exceed start={start}, got {t_max}")
        return cls(start, (t_max - start) / (points - 1), int(points))

    @property
    def times(self) -> np.ndarray:
        return self.start + np.arange(self.count) * self.step


@dataclass(frozen=True)
class FidSeries:
    times: np.ndarray
    values: np.ndarray
    normalization: str = RAW
    amplitude_at_zero: float = 1.0
    label: str = ""

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if times.shape != values.shape or times.ndim != 1:
            raise ValidationError("values", "times and values must be 1-d arrays of equal length")
        if times.size > 1 and not np.all(np.diff(times) > 0):
            raise ValidationError("times", "must be strictly ascending")
        if self.normalization not in (RAW, UNIT_AT_ZERO):
            raise ValidationError("normalization", f"unknown mode {self.normalization!r}")
        times.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    def normalized(self) -> "FidSeries":
        """Divide by G(0); a no-op for series that are already unit-at-zero."""
        if self.normalization == UNIT_AT_ZERO:
            return self
        if self.amplitude_at_zero == 0:
            raise ZeroDivisionError("cannot normalize a series with G(0) = 0")
        return FidSeries(
            self.times,
            self.values / self.amplitude_at_zero,
            UNIT_AT_ZERO,
            self.amplitude_at_zero,
            self.label,
        )


@dataclass(frozen=True)
class ThermalSpec:
    """Inverse-temperature parameter beta = hbar*omega0 / (k_B*T)."""

    beta: float
    larmor_frequency: float | None = field(default=None, compare=False)
    temperature: float | None = field(default=None, compare=False)

    def __post_init__(self):
        beta = _finite("beta", self.beta)
        if beta <= 0:
            raise ValidationError("beta", f"must be > 0, got {beta}")
        object.__setattr__(self, "beta", beta)


def beta_from_physical(larmor_frequency: float, temperature: float) -> ThermalSpec:
    """Thermal parameter from the Larmor angular frequency (rad/s) and temperature (K)."""
    omega = _finite("larmor_frequency", larmor_frequency)
    temp = _finite("temperature", temperature)
    if omega <= 0:
        raise ValidationError("larmor_frequency", f"must be > 0, got {omega}")
    if temp <= 0:
        raise ValidationError("temperature", f"must be > 0, got {temp}")
    return ThermalSpec(HBAR * omega / (K_BOLTZMANN * temp), omega, temp)
