"""Brute-force dense-matrix reference for small chains.

Basis convention: site j (1-based) is bit j-1 of the basis index, and a set
bit means spin up (I_j^z = +1/2). Everything is built in the full 2^N space;
there is no symmetry reduction on purpose.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .model import RAW, ChainSpec, ComputeGuardError, FidSeries, ThermalSpec, TimeGrid, ValidationError

MAX_DENSE_SPINS = 12


def _guard(n: int) -> None:
    if n < 1:
        raise ValidationError("n_spins", f"must be >= 1, got {n}")
    if n > MAX_DENSE_SPINS:
        raise ComputeGuardError(
            f"dense oracle is limited to N <= {MAX_DENSE_SPINS} (got N = {n}); "
            "use the free-fermion engine for longer chains"
        )


def magnetizations(n_spins: int) -> np.ndarray:
    """Total I_z eigenvalue of each basis state: popcount(b) - N/2."""
    _guard(n_spins)
    b = np.arange(2**n_spins)
    pop = np.zeros_like(b)
    for j in range(n_spins):
        pop += (b >> j) & 1
    return pop - 0.5 * n_spins


def build_hamiltonian(chain: ChainSpec) -> np.ndarray:
    """-(D/2) sum_j (I+_j I+_{j+1} + I-_j I-_{j+1}) as a real symmetric matrix."""
    n = chain.n_spins
    _guard(n)
    dim = 2**n
    h = np.zeros((dim, dim))
    b = np.arange(dim)
    for j in range(n - 1):
        lo = (b >> j) & 1
        hi = (b >> (j + 1)) & 1
        # I+I+ raises a down-down pair, I-I- lowers an up-up pair; both are 1 * 1
        src = b[lo == hi]
        h[src ^ (3 << j), src] = -0.5 * chain.coupling
    return h


def build_iz(n_spins: int) -> np.ndarray:
    return np.diag(magnetizations(n_spins))


def _check_hermitian(a: np.ndarray, name: str) -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {a.shape}")
    scale = max(1.0, float(np.abs(a).max(initial=0.0)))
    if np.abs(a - a.conj().T).max(initial=0.0) > 1e-12 * scale:
        raise ValueError(f"{name} is not Hermitian")


class Propagator:
    """exp(-iHt) via one eigendecomposition of H, reused for every t.

    Instances are read-only after construction and can be shared between
    threads.
    """

    def __init__(self, h: np.ndarray):
        h = np.asarray(h)
        _check_hermitian(h, "h")
        self.h = h
        self.eigenvalues, self.eigenvectors = np.linalg.eigh(h)

    @property
    def dim(self) -> int:
        return self.h.shape[0]

    def residual(self) -> float:
        """max |H V - V Lambda|."""
        v = self.eigenvectors
        return float(np.abs(self.h @ v - v * self.eigenvalues).max())

    def to_eigenbasis(self, a: np.ndarray) -> np.ndarray:
        v = self.eigenvectors
        return v.conj().T @ a @ v

    def evolve(self, rho0: np.ndarray, t: float) -> np.ndarray:
        rho0 = np.asarray(rho0)
        if rho0.shape != self.h.shape:
            raise ValueError(f"dimension mismatch: h is {self.h.shape}, rho0 is {rho0.shape}")
        if t == 0:
            return rho0.copy()
        v = self.eigenvectors
        phase = np.exp(-1j * self.eigenvalues * t)
        u = (v * phase) @ v.conj().T
        return u @ rho0 @ u.conj().T

    def correlation(self, rho0: np.ndarray, observable: np.ndarray, times) -> np.ndarray:
        """Tr(U(t) rho0 U(t)^dag observable) for each t, real part.

        In the eigenbasis this is sum_ab A_ab B_ba exp(-i(l_a - l_b) t), evaluated
        as p^T C conj(p) with p_a = exp(-i l_a t).
        """
        a = self.to_eigenbasis(rho0)
        b = self.to_eigenbasis(observable)
        c = a * b.T
        out = np.empty(len(times))
        for i, t in enumerate(times):
            p = np.exp(-1j * self.eigenvalues * t)
            out[i] = (p @ c @ p.conj()).real
        return out


def evolve(h: np.ndarray, rho0: np.ndarray, t: float) -> np.ndarray:
    """rho(t) = exp(-iHt) rho0 exp(iHt). Build a :class:`Propagator` when evolving many times."""
    return Propagator(h).evolve(rho0, t)


@dataclass(frozen=True)
class _Engine:
    chain: ChainSpec

    @cached_property
    def propagator(self) -> Propagator:
        return Propagator(build_hamiltonian(self.chain))

    @cached_property
    def iz(self) -> np.ndarray:
        return build_iz(self.chain.n_spins)


def fid_oracle(chain: ChainSpec, grid: TimeGrid) -> FidSeries:
    """High-temperature FID, G(t) = Tr(rho(t) I_z) with rho(0) = I_z."""
    eng = _Engine(chain)
    t = grid.times
    values = eng.propagator.correlation(eng.iz, eng.iz, t)
    g0 = float(np.sum(magnetizations(chain.n_spins) ** 2))
    return FidSeries(t, values, RAW, g0, "oracle")


def equilibrium_density(n_spins: int, thermal: ThermalSpec) -> np.ndarray:
    """exp(beta I_z) / Tr exp(beta I_z); diagonal."""
    m = magnetizations(n_spins)
    # shift the exponent so the largest weight is 1
    w = np.exp(thermal.beta * (m - m.max()))
    return np.diag(w / w.sum())


def thermal_fid_oracle(chain: ChainSpec, thermal: ThermalSpec, grid: TimeGrid) -> FidSeries:
    eng = _Engine(chain)
    rho = equilibrium_density(chain.n_spins, thermal)
    t = grid.times
    values = eng.propagator.correlation(rho, eng.iz, t)
    g0 = float(np.trace(rho @ eng.iz).real)
    return FidSeries(t, values, RAW, g0, "thermal_oracle")


def commutator_second_moment(chain: ChainSpec) -> float:
    """Tr([H, I_z][I_z, H]) / Tr(I_z^2)."""
    h = build_hamiltonian(chain)
    iz = build_iz(chain.n_spins)
    c = h @ iz - iz @ h
    return float(np.trace(c @ (-c)).real / np.trace(iz @ iz).real)


@dataclass(frozen=True)
class CoherenceSpectrum:
    n_spins: int
    weights: dict  # order m -> squared Frobenius norm of the sector
    iz_traces: dict  # order m -> Tr(rho_m I_z)
    sectors: dict | None = None

    def total_weight(self) -> float:
        return float(sum(self.weights.values()))

    def weight_outside(self, orders) -> float:
        keep = set(orders)
        return float(sum(w for m, w in self.weights.items() if m not in keep))


def coherence_decompose(rho: np.ndarray, keep_sectors: bool = False) -> CoherenceSpectrum:
    """Split rho into sectors rho_m of elements <a|rho|b> with M(a) - M(b) = m."""
    rho = np.asarray(rho)
    dim = rho.shape[0]
    n = dim.bit_length() - 1
    if rho.shape != (dim, dim) or 2**n != dim:
        raise ValueError(f"expected a 2^N x 2^N matrix, got shape {rho.shape}")
    mag = magnetizations(n)
    order = np.rint(mag[:, None] - mag[None, :]).astype(int)
    iz_diag = mag
    weights, traces, sectors = {}, {}, {} if keep_sectors else None
    for m in range(-n, n + 1):
        mask = order == m
        block = np.where(mask, rho, 0)
        weights[m] = float(np.sum(np.abs(rho[mask]) ** 2))
        # Tr(rho_m I_z) = sum_a (rho_m)_aa * M(a); only the diagonal of rho_m enters
        traces[m] = complex(np.sum(np.diagonal(block) * iz_diag))
        if keep_sectors:
            sectors[m] = block
    return CoherenceSpectrum(n, weights, traces, sectors)
