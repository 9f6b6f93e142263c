"""Multi-pulse experiment ingestion and fitting of the coupling D.

Model: I(t) = A * J0(2 D t). For fixed D the best amplitude is linear least
squares, so only D is searched. The residual is oscillatory in D, so a log
grid scan locates the deepest valley before golden-section refinement.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .model import ValidationError
from .special import DEFAULT_POLICY, BesselEvalPolicy, bessel_j

CSV_COLUMNS = ("tau_us", "cycles", "intensity")
DEFAULT_CYCLE_MULTIPLIER = 12.0
SCAN_POINTS = 400
REL_WIDTH = 1e-6

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ExperimentRecord:
    tau: float  # seconds
    cycles: int
    intensity: float

    def __post_init__(self):
        if not (math.isfinite(self.tau) and self.tau > 0):
            raise ValidationError("tau", f"must be > 0, got {self.tau}")
        if int(self.cycles) != self.cycles or self.cycles < 1:
            raise ValidationError("cycles", f"must be an integer >= 1, got {self.cycles}")
        if not math.isfinite(self.intensity):
            raise ValidationError("intensity", f"must be finite, got {self.intensity}")


@dataclass(frozen=True)
class PulseCycleSpec:
    """Timing of one sequence period; the period is ``cycle_duration_in_tau * tau``."""

    tau: float | None = None  # only used when records do not carry their own tau
    pulses_per_cycle: int = 8
    cycle_duration_in_tau: float = DEFAULT_CYCLE_MULTIPLIER

    def __post_init__(self):
        if self.tau is not None and not self.tau > 0:
            raise ValidationError("tau", f"must be > 0, got {self.tau}")
        if self.pulses_per_cycle < 1:
            raise ValidationError("pulses_per_cycle", f"must be >= 1, got {self.pulses_per_cycle}")
        if not (math.isfinite(self.cycle_duration_in_tau) and self.cycle_duration_in_tau > 0):
            raise ValidationError(
                "cycle_duration_in_tau", f"must be > 0, got {self.cycle_duration_in_tau}"
            )

    def cycle_duration(self, tau: float) -> float:
        return self.cycle_duration_in_tau * tau


@dataclass(frozen=True)
class FitResult:
    d_estimate: float  # rad/s
    amplitude: float
    rms_residual: float
    n_points: int
    d_search_interval: tuple
    bracketed: bool = True
    evaluations: int = field(default=0, compare=False)

    def to_json(self) -> dict:
        return {
            "d_per_s": self.d_estimate,
            "amplitude": self.amplitude,
            "rms_residual": self.rms_residual,
            "n_points": self.n_points,
            "search_lo": self.d_search_interval[0],
            "search_hi": self.d_search_interval[1],
            "bracketed": self.bracketed,
        }


class ExperimentFormatError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def ingest_records(source) -> list[ExperimentRecord]:
    """Parse ``tau_us,cycles,intensity`` CSV from a text/byte stream or a string.

    Lines starting with ``#`` are comments. tau is converted from microseconds
    to seconds.
    """
    if isinstance(source, (bytes, bytearray)):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    else:
        raw = source.read()
        text = raw.decode("utf-8") if isinstance(raw, (bytes, bytearray)) else raw

    records = []
    header = None
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
            continue
        cells = [c.strip() for c in row]
        if header is None:
            if tuple(cells) != CSV_COLUMNS:
                raise ExperimentFormatError(lineno, f"expected header {','.join(CSV_COLUMNS)}, got {','.join(cells)}")
            header = cells
            continue
        if len(cells) != len(CSV_COLUMNS):
            raise ExperimentFormatError(lineno, f"expected {len(CSV_COLUMNS)} fields, got {len(cells)}")
        try:
            tau_us = float(cells[0])
            cycles_f = float(cells[1])
            intensity = float(cells[2])
        except ValueError as exc:
            raise ExperimentFormatError(lineno, str(exc)) from None
        if not cycles_f.is_integer():
            raise ExperimentFormatError(lineno, f"cycles must be an integer, got {cells[1]}")
        try:
            records.append(ExperimentRecord(tau_us * 1e-6, int(cycles_f), intensity))
        except ValidationError as exc:
            raise ExperimentFormatError(lineno, str(exc)) from exc
    if header is None:
        raise ExperimentFormatError(0, "empty input: no header found")
    return records


def read_records(path) -> list[ExperimentRecord]:
    with open(path, "rb") as fh:
        return ingest_records(fh)


def tau_groups(records) -> dict:
    groups = {}
    for rec in records:
        groups.setdefault(rec.tau, []).append(rec)
    return dict(sorted(groups.items()))


def map_time(records, cycle_spec: PulseCycleSpec = PulseCycleSpec()) -> list[tuple[float, float]]:
    """Evolution time of each record, ``cycles * multiplier * tau``, stably sorted by t."""
    points = [(rec.cycles * cycle_spec.cycle_duration(rec.tau), rec.intensity) for rec in records]
    return sorted(points, key=lambda p: p[0])


def _profile(t: np.ndarray, y: np.ndarray, policy: BesselEvalPolicy):
    """Return f(D) -> (sum of squared residuals, optimal amplitude)."""

    def evaluate(d):
        model = bessel_j(0, 2.0 * d * t, policy)
        mm = float(np.dot(model, model))
        amp = float(np.dot(y, model)) / mm if mm > 0 else 0.0
        r = y - amp * model
        return float(np.dot(r, r)), amp

    return evaluate


def fit_fid(points, search: tuple, policy: BesselEvalPolicy = DEFAULT_POLICY,
            scan_points: int = SCAN_POINTS, rel_width: float = REL_WIDTH) -> FitResult:
    """Separable least squares for I(t) = A J0(2 D t) with D in ``search``."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 3:
        raise ValidationError("points", "need at least 3 (t, intensity) pairs")
    d_min, d_max = (float(v) for v in search)
    if not (math.isfinite(d_min) and math.isfinite(d_max) and 0 < d_min < d_max):
        raise ValidationError("search", f"need 0 < d_min < d_max, got ({d_min}, {d_max})")
    t, y = pts[:, 0], pts[:, 1]
    f = _profile(t, y, policy)
    n_evals = 0

    grid = np.geomspace(d_min, d_max, scan_points)
    models = bessel_j(0, 2.0 * np.multiply.outer(grid, t), policy)
    mm = np.einsum("ij,ij->i", models, models)
    amps = np.divide(models @ y, mm, out=np.zeros_like(mm), where=mm > 0)
    resid = y[None, :] - amps[:, None] * models
    scan = np.einsum("ij,ij->i", resid, resid)
    n_evals += scan_points
    best = int(np.argmin(scan))
    lo = grid[max(best - 1, 0)]
    hi = grid[min(best + 1, scan_points - 1)]

    # golden-section on the bracketing cell pair
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c)[0], f(d)[0]
    n_evals += 2
    while (b - a) > rel_width * 0.5 * (a + b):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)[0]
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)[0]
        n_evals += 1

    candidates = [(fc, c), (fd, d), (float(scan[best]), float(grid[best]))]
    ss, d_hat = min(candidates)
    ss, amp = f(d_hat)
    n_evals += 1
    tol = rel_width * d_hat
    bracketed = bool((d_hat - d_min) > tol and (d_max - d_hat) > tol)
    return FitResult(
        d_estimate=float(d_hat),
        amplitude=float(amp),
        rms_residual=math.sqrt(ss / len(t)),
        n_points=len(t),
        d_search_interval=(d_min, d_max),
        bracketed=bracketed,
        evaluations=n_evals,
    )


def residual_at(points, d: float, policy: BesselEvalPolicy = DEFAULT_POLICY) -> float:
    """RMS residual at a given D with the amplitude profiled out."""
    pts = np.asarray(points, dtype=float)
    ss, _ = _profile(pts[:, 0], pts[:, 1], policy)(d)
    return math.sqrt(ss / len(pts))


def reference_schedule(taus_us=(0.8, 0.82, 0.84, 0.88, 1.0), cycles=range(1, 65)):
    """(tau seconds, cycles) pairs matching the five-tau, 1..64-repetition schedule."""
    return [(tau * 1e-6, n) for tau in taus_us for n in cycles]


def synthetic_records(d: float, amplitude: float = 1.0, noise: float = 0.0, seed: int = 0,
                      cycle_spec: PulseCycleSpec = PulseCycleSpec(), schedule=None) -> list[ExperimentRecord]:
    """Records drawn from A J0(2 D t) plus Gaussian noise of std ``noise * amplitude``."""
    rng = np.random.default_rng(seed)
    schedule = reference_schedule() if schedule is None else schedule
    out = []
    for tau, n in schedule:
        t = n * cycle_spec.cycle_duration(tau)
        value = amplitude * bessel_j(0, 2.0 * d * t)
        if noise:
            value += rng.normal(0.0, noise * amplitude)
        out.append(ExperimentRecord(tau, n, float(value)))
    return out
