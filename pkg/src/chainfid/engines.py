"""Engine selection for the high-temperature FID."""

from __future__ import annotations

from . import fermion, oracle
from .model import ChainSpec, ComputeGuardError, FidSeries, TimeGrid

ENGINES = ("auto", "oracle", "fermion")


def compute_fid(chain: ChainSpec, grid: TimeGrid, engine: str = "auto") -> FidSeries:
    """Normalized FID. ``auto`` always picks the free-fermion engine: it is exact
    and O(N) per point. The dense oracle is only used when asked for and only
    for N <= 12."""
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}; choose from {ENGINES}")
    if engine == "oracle":
        if chain.n_spins > oracle.MAX_DENSE_SPINS:
            raise ComputeGuardError(
                f"oracle engine needs N <= {oracle.MAX_DENSE_SPINS}; got {chain.n_spins}"
            )
        return oracle.fid_oracle(chain, grid).normalized()
    return fermion.fid_free_fermion(chain, grid).normalized()
