"""Stroboscopic dynamics, Fourier analysis and configuration-space walks.

Time series are sampled at integer periods m = 1..n (the m = 0 value is kept
separately so raw output can include it). The discrete Fourier transform uses

    M(k) = (1/n) sum_{m=1..n} exp(-i 2 pi k m / n) M(mT),    k = 0..n-1,

so a 4T-periodic series peaks exactly at bins n/4 and 3n/4 and a 2T-periodic
one at bin n/2 when n is a multiple of 4.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UndefinedFidelityError
from .floquet import fast_floquet_operator
from .hamiltonians import DisorderRealization, ModelParams, replace_lambda
from .spins import basis_state, magnetization_weights


@dataclass
class TimeSeries:
    """Total magnetization at stroboscopic times; values[m-1] = M(mT)."""

    values: np.ndarray
    period: float
    initial_config: int
    initial_value: float


@dataclass
class PowerSpectrum:
    """Squared DFT magnitudes on the frequency grid omega_k = 2 pi k/(n T)."""

    values: np.ndarray
    frequencies: np.ndarray


@dataclass
class WalkRecord:
    """Configuration populations |<l|F^m|i>|^2 for m = 0..n (rows)."""

    populations: np.ndarray
    initial_config: int


def evolve_stroboscopic(f: np.ndarray, psi0: np.ndarray, n_periods: int) -> np.ndarray:
    """States F^m psi0 for m = 0..n, stacked as rows."""
    if n_periods < 0:
        raise ValueError("n_periods must be nonnegative")
    psi0 = np.asarray(psi0, dtype=complex)
    out = np.empty((n_periods + 1, len(psi0)), dtype=complex)
    out[0] = psi0
    for m in range(1, n_periods + 1):
        out[m] = f @ out[m - 1]
    return out


def magnetization_series(
    params: ModelParams,
    disorder: DisorderRealization,
    initial_config: int,
    n_periods: int,
) -> TimeSeries:
    """Total magnetization after each of n periods from one basis configuration."""
    if n_periods < 1:
        raise ValueError("n_periods must be >= 1")
    f = fast_floquet_operator(params, disorder)
    states = evolve_stroboscopic(f, basis_state(params.n_sites, initial_config), n_periods)
    weights = magnetization_weights(params.n_sites)
    magnetizations = (np.abs(states) ** 2) @ weights
    return TimeSeries(
        values=magnetizations[1:],
        period=params.period,
        initial_config=initial_config,
        initial_value=float(magnetizations[0]),
    )


def _dft_values(values: np.ndarray) -> np.ndarray:
    # FFT over m = 0..n-1 matches the m = 1..n sum after a one-step phase twist
    n = len(values)
    twist = np.exp(-2j * np.pi * np.arange(n) / n)
    return twist * np.fft.fft(values) / n


def dft(series: TimeSeries) -> np.ndarray:
    """Complex spectrum of the series, bins k = 0..n-1 with 1/n normalization."""
    return _dft_values(np.asarray(series.values, dtype=float))


def power_spectrum(series: TimeSeries) -> PowerSpectrum:
    """Elementwise squared modulus of the DFT."""
    spectrum = dft(series)
    n = len(series.values)
    freqs = 2.0 * np.pi * np.arange(n) / (n * series.period)
    return PowerSpectrum(values=np.abs(spectrum) ** 2, frequencies=freqs)


def _spectrum_values(v) -> np.ndarray:
    return np.asarray(v.values if isinstance(v, PowerSpectrum) else v, dtype=float)


def spectrum_fidelity(v_ref, v) -> float:
    """Square root of the cosine similarity of two power spectra."""
    a = _spectrum_values(v_ref)
    b = _spectrum_values(v)
    if a.shape != b.shape:
        raise ValueError(f"spectrum lengths differ: {a.shape} vs {b.shape}")
    norm_a = np.linalg.norm(a)
    norm_b = np.linalg.norm(b)
    if norm_a == 0.0 or norm_b == 0.0:
        raise UndefinedFidelityError("fidelity of a zero power spectrum is undefined")
    return float(np.sqrt(np.clip(np.dot(a, b) / (norm_a * norm_b), 0.0, 1.0)))


@dataclass
class FidelityMaps:
    """Power-spectrum fidelities against the lam = 0 and lam = 1 references.

    Rows are initial configurations (all 2^N of them), columns follow the
    lam grid. One shared disorder realization is used across the whole grid.
    """

    lambdas: np.ndarray
    fid_4t: np.ndarray
    fid_2t: np.ndarray


def _all_config_power_spectra(
    params: ModelParams, disorder: DisorderRealization, n_periods: int
) -> np.ndarray:
    """(n, D) power spectra of the magnetization series of every basis state."""
    f = fast_floquet_operator(params, disorder)
    d = params.dim
    weights = magnetization_weights(params.n_sites)
    states = np.eye(d, dtype=complex)  # column i = configuration i
    magnetizations = np.empty((n_periods, d))
    for m in range(n_periods):
        states = f @ states
        magnetizations[m] = weights @ (np.abs(states) ** 2)
    n = n_periods
    twist = np.exp(-2j * np.pi * np.arange(n) / n)
    spectra = twist[:, None] * np.fft.fft(magnetizations, axis=0) / n
    return np.abs(spectra) ** 2


def fidelity_map(
    params: ModelParams,
    disorder: DisorderRealization,
    lambdas,
    n_periods: int,
) -> FidelityMaps:
    """Both fidelity maps over every initial configuration and the lam grid."""
    lambdas = np.asarray(lambdas, dtype=float)
    if np.any(lambdas < 0.0) or np.any(lambdas > 1.0):
        raise ValueError("lambda grid must lie within [0, 1]")
    d = params.dim
    ref_4t = _all_config_power_spectra(replace_lambda(params, 0.0), disorder, n_periods)
    ref_2t = _all_config_power_spectra(replace_lambda(params, 1.0), disorder, n_periods)
    fid_4t = np.empty((d, len(lambdas)))
    fid_2t = np.empty((d, len(lambdas)))
    for col, lam in enumerate(lambdas):
        spectra = _all_config_power_spectra(replace_lambda(params, lam), disorder, n_periods)
        for i in range(d):
            fid_4t[i, col] = spectrum_fidelity(ref_4t[:, i], spectra[:, i])
            fid_2t[i, col] = spectrum_fidelity(ref_2t[:, i], spectra[:, i])
    return FidelityMaps(lambdas=lambdas, fid_4t=fid_4t, fid_2t=fid_2t)


def walk_populations(
    params: ModelParams,
    disorder: DisorderRealization,
    initial_config: int,
    n_periods: int,
) -> WalkRecord:
    """Quantum walk over configurations: populations after each period."""
    f = fast_floquet_operator(params, disorder)
    states = evolve_stroboscopic(f, basis_state(params.n_sites, initial_config), n_periods)
    return WalkRecord(populations=np.abs(states) ** 2, initial_config=initial_config)


def walk_support(record: WalkRecord, threshold: float = 1e-3) -> int:
    """Number of configurations whose population ever exceeds the threshold."""
    return int(np.sum(record.populations.max(axis=0) > threshold))
