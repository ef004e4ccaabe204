"""Disorder-ensemble sweeps over the deformation grid.

Every (lambda, realization) cell gets its own seed derived from the master
seed by a keyed hash, so any cell can be regenerated in isolation and the
result of a sweep is independent of scheduling. Cells run on a bounded
thread pool (the heavy work is LAPACK, which releases the GIL); all
floating-point reductions happen afterwards in fixed index order, so results
are bitwise identical for any worker count.
"""

from __future__ import annotations

import hashlib
import os
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .diagnostics import (
    GapRatioSample,
    HistogramData,
    gap_ratios,
    ratio_histogram,
    state_fractal_dimensions,
)
from .dynamics import magnetization_series
from .floquet import diagonalize_floquet, fast_floquet_operator
from .hamiltonians import ModelParams, default_params, sample_disorder

DIAGNOSTIC_NAMES = ("spectrum", "levels", "fractal", "magnetization")
DEFAULT_DIAGNOSTICS = ("spectrum", "levels", "fractal")

_SEED_MASK = (1 << 64) - 1


def derive_seed(master_seed: int, lambda_index: int, realization_index: int) -> int:
    """Collision-resistant 64-bit seed for one sweep cell.

    Keyed blake2b hash of the (master, lambda_index, realization_index)
    triple; independent of execution order and worker count.
    """
    if lambda_index < 0 or realization_index < 0:
        raise ValueError("grid indices must be nonnegative")
    payload = struct.pack(
        "<QQQ", master_seed & _SEED_MASK, lambda_index & _SEED_MASK, realization_index & _SEED_MASK
    )
    digest = hashlib.blake2b(payload, digest_size=8, person=b"dtc-cell").digest()
    return int.from_bytes(digest, "little")


@dataclass(frozen=True)
class SweepPlan:
    """What to compute: lambda grid x realizations, with seed provenance."""

    lambdas: tuple
    realizations: int
    master_seed: int
    n_sites: int = 8
    periods: int = 64
    diagnostics: tuple = DEFAULT_DIAGNOSTICS
    initial_config: int = 0
    params_factory: object = default_params

    def __post_init__(self):
        object.__setattr__(self, "lambdas", tuple(float(v) for v in self.lambdas))
        object.__setattr__(self, "diagnostics", tuple(self.diagnostics))
        if any(not 0.0 <= v <= 1.0 for v in self.lambdas):
            raise ValueError("lambda grid values must lie in [0, 1]")
        if self.realizations < 1:
            raise ValueError("realizations must be >= 1")
        unknown = set(self.diagnostics) - set(DIAGNOSTIC_NAMES)
        if unknown:
            raise ValueError(f"unknown diagnostics: {sorted(unknown)}")

    def params(self, lam: float) -> ModelParams:
        return self.params_factory(self.n_sites, lam)


@dataclass
class CellRecord:
    """Everything computed for one (lambda, realization) cell."""

    lambda_index: int
    realization_index: int
    lam: float
    seed: int
    quasienergies: np.ndarray | None = None
    ratios: GapRatioSample | None = None
    fractal_dimensions: np.ndarray | None = None
    magnetization: np.ndarray | None = None
    error: str | None = None


@dataclass
class EnsembleResult:
    """All cell records of a sweep, ordered by (lambda_index, realization_index)."""

    plan: SweepPlan
    records: list = field(default_factory=list)

    def cells_for(self, lambda_index: int) -> list:
        # sorted on the way out so aggregates do not depend on arrival order
        cells = [r for r in self.records if r.lambda_index == lambda_index]
        return sorted(cells, key=lambda r: r.realization_index)


def run_cell(plan: SweepPlan, lambda_index: int, realization_index: int) -> CellRecord:
    """Compute one sweep cell; failures are recorded, not raised."""
    lam = plan.lambdas[lambda_index]
    seed = derive_seed(plan.master_seed, lambda_index, realization_index)
    record = CellRecord(
        lambda_index=lambda_index,
        realization_index=realization_index,
        lam=lam,
        seed=seed,
    )
    try:
        params = plan.params(lam)
        disorder = sample_disorder(params, seed)
        result = diagonalize_floquet(fast_floquet_operator(params, disorder), params.period)
        if "spectrum" in plan.diagnostics:
            record.quasienergies = result.quasienergies
        if "levels" in plan.diagnostics:
            record.ratios = gap_ratios(
                result.quasienergies, source=(lam, seed, plan.n_sites)
            )
        if "fractal" in plan.diagnostics:
            record.fractal_dimensions = state_fractal_dimensions(result)
        if "magnetization" in plan.diagnostics:
            series = magnetization_series(
                params, disorder, plan.initial_config, plan.periods
            )
            record.magnetization = np.concatenate([[series.initial_value], series.values])
    except Exception as exc:  # cell failures never abort the sweep
        record.error = f"{type(exc).__name__}: {exc}"
    return record


def worker_count(requested: int | None = None) -> int:
    """Worker-pool size: explicit argument, DTCMORPH_WORKERS, else cpu count."""
    if requested is not None:
        return max(1, int(requested))
    env = os.environ.get("DTCMORPH_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_sweep(plan: SweepPlan, workers: int | None = None) -> EnsembleResult:
    """Run every cell of the plan; deterministic for any worker count."""
    cells = [
        (li, ri)
        for li in range(len(plan.lambdas))
        for ri in range(plan.realizations)
    ]
    n_workers = worker_count(workers)
    if n_workers == 1:
        records = [run_cell(plan, li, ri) for li, ri in cells]
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            records = list(pool.map(lambda cell: run_cell(plan, *cell), cells))
    return EnsembleResult(plan=plan, records=records)


def _good_cells(result: EnsembleResult, lambda_index: int, attr: str) -> list:
    cells = []
    for record in result.cells_for(lambda_index):
        if record.error is not None:
            continue
        value = getattr(record, attr)
        if value is None:
            raise ValueError(f"sweep records are missing the {attr!r} diagnostic")
        cells.append(value)
    return cells


def pooled_mean_ratios(result: EnsembleResult) -> np.ndarray:
    """Pooled mean gap ratio per lambda, realizations merged in index order."""
    means = np.empty(len(result.plan.lambdas))
    for li in range(len(result.plan.lambdas)):
        samples = _good_cells(result, li, "ratios")
        pooled = np.concatenate([s.ratios for s in samples])
        means[li] = pooled.mean()
    return means


def pooled_histograms(result: EnsembleResult, bins: int = 20) -> list[HistogramData]:
    """Pooled ratio histogram per lambda."""
    out = []
    for li in range(len(result.plan.lambdas)):
        samples = _good_cells(result, li, "ratios")
        out.append(ratio_histogram(np.concatenate([s.ratios for s in samples]), bins=bins))
    return out


def aggregate_fractal(result: EnsembleResult) -> np.ndarray:
    """Mean fractal dimension per lambda (mean of per-record means)."""
    curve = np.empty(len(result.plan.lambdas))
    for li in range(len(result.plan.lambdas)):
        dims = _good_cells(result, li, "fractal_dimensions")
        curve[li] = np.mean([np.mean(d) for d in dims])
    return curve
