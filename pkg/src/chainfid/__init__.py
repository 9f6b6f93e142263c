"""FID of a nearest-neighbour double-quantum spin chain under multi-pulse NMR.

Three engines compute the same signal: a dense 2^N oracle, an exact O(N)
free-fermion mode sum, and closed-form Bessel expressions for long chains.
"""

from .closed_form import (
    ClosedFormVariant,
    SecondMoment,
    fid_closed_finite,
    fid_infinite,
    fid_thermal_closed,
    second_moment,
    thermal_amplitude,
)
from .engines import compute_fid
from .fermion import (
    BogoliubovWeights,
    ModeSet,
    bogoliubov_weights,
    fid_free_fermion,
    fid_thermal_free_fermion,
    mode_second_moment,
    mode_set,
)
from .fit import (
    ExperimentRecord,
    FitResult,
    PulseCycleSpec,
    fit_fid,
    ingest_records,
    map_time,
)
from .model import (
    ChainSpec,
    ComputeGuardError,
    FidSeries,
    ThermalSpec,
    TimeGrid,
    ValidationError,
    beta_from_physical,
    make_chain,
)
from .oracle import (
    CoherenceSpectrum,
    Propagator,
    build_hamiltonian,
    build_iz,
    coherence_decompose,
    commutator_second_moment,
    evolve,
    fid_oracle,
    thermal_fid_oracle,
)
from .special import BesselEvalPolicy, bessel_cos_identity_residual, bessel_j, bessel_j_table

__version__ = "0.1.0"
