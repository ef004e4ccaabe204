"""Driven spin-chain simulator: melting and recrystallization of
time-crystalline order under a three-segment periodic drive.

The public surface mirrors the layer structure: spin basis and observables
(`spins`), segment Hamiltonians (`hamiltonians`), one-period propagators and
quasienergy spectra (`floquet`), level-statistics and localization
diagnostics (`diagnostics`), stroboscopic dynamics and Fourier analysis
(`dynamics`), seeded disorder-ensemble sweeps (`ensemble`), and the CLI with
its file formats (`cli`, `fileio`).
"""

from .backend import active_backend, set_backend
from .diagnostics import (
    GapRatioSample,
    HistogramData,
    floquet_state_map,
    fractal_dimension,
    gap_ratios,
    mean_gap_ratio,
    participation_ratio,
    ratio_histogram,
    reference_density,
    state_fractal_dimensions,
)
from .dynamics import (
    FidelityMaps,
    PowerSpectrum,
    TimeSeries,
    WalkRecord,
    dft,
    evolve_stroboscopic,
    fidelity_map,
    magnetization_series,
    power_spectrum,
    spectrum_fidelity,
    walk_populations,
    walk_support,
)
from .ensemble import (
    CellRecord,
    EnsembleResult,
    SweepPlan,
    aggregate_fractal,
    derive_seed,
    pooled_histograms,
    pooled_mean_ratios,
    run_sweep,
)
from .errors import UndefinedFidelityError, ValidationError
from .fileio import ConfigError, RunConfig, TOOL_VERSION
from .floquet import (
    FloquetResult,
    diagonalize_floquet,
    effective_hamiltonian,
    fast_floquet_operator,
    floquet_operator,
    propagator,
    sparsity_fraction,
)
from .hamiltonians import (
    DisorderRealization,
    ModelParams,
    build_h1,
    build_h2,
    build_h3,
    default_params,
    replace_lambda,
    sample_disorder,
)
from .spins import (
    apply_pauli,
    basis_state,
    local_magnetization,
    total_magnetization,
)

__version__ = TOOL_VERSION
