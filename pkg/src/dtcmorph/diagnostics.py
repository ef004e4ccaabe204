"""Level-statistics and localization diagnostics.

Gap ratios r = min(delta_a, delta_{a+1}) / max(delta_a, delta_{a+1}) of the
sorted quasienergies distinguish localized from ergodic spectra without
spectral unfolding. Reference densities on [0, 1]:

* poisson:  P(r) = 2 / (1+r)^2                       (uncorrelated levels)
* goe:      P(r) = (27/4) (r+r^2) / (1+r+r^2)^(5/2)  (ergodic, undriven)
* coe:      3-eigenphase circular-orthogonal surmise (ergodic, driven)

The COE closed form implemented here is the one obtained by integrating the
3-level circular-ensemble joint eigenphase density; it is normalized to 1 on
[0, 1] (checked by quadrature in the test suite).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import ValidationError
from .floquet import FloquetResult

REFERENCE_KINDS = ("poisson", "goe", "coe")

# below this, consecutive gaps count as exactly degenerate
DEGENERATE_GAP = 1e-12


@dataclass
class GapRatioSample:
    """Gap ratios of one spectrum plus degenerate-gap bookkeeping.

    `double_degenerate` counts ratio positions where both gaps were below
    DEGENERATE_GAP (ratio pinned to 1), `single_degenerate` where exactly one
    was (ratio pinned to 0).
    """

    ratios: np.ndarray
    source: tuple | None = None
    double_degenerate: int = 0
    single_degenerate: int = 0


def gap_ratios(quasienergies: np.ndarray, source: tuple | None = None) -> GapRatioSample:
    """Ratios of consecutive gaps of an ascending spectrum (D-2 values)."""
    eps = np.asarray(quasienergies, dtype=float)
    if eps.ndim != 1 or len(eps) < 3:
        raise ValueError("need a 1-d spectrum with at least 3 levels")
    deltas = np.diff(eps)
    if np.any(deltas < 0):
        raise ValueError("quasienergies must be sorted ascending")
    lo = np.minimum(deltas[:-1], deltas[1:])
    hi = np.maximum(deltas[:-1], deltas[1:])
    tiny_lo = lo < DEGENERATE_GAP
    tiny_hi = hi < DEGENERATE_GAP
    ratios = lo / np.where(tiny_hi, 1.0, hi)
    ratios[tiny_lo & ~tiny_hi] = 0.0
    ratios[tiny_hi] = 1.0
    return GapRatioSample(
        ratios=np.clip(ratios, 0.0, 1.0),
        source=source,
        double_degenerate=int(np.sum(tiny_hi)),
        single_degenerate=int(np.sum(tiny_lo & ~tiny_hi)),
    )


def _poisson_density(r):
    return 2.0 / (1.0 + r) ** 2


def _goe_density(r):
    return 6.75 * (r + r * r) / (1.0 + r + r * r) ** 2.5


def _coe_density(r):
    u = 2.0 * np.pi * r / (1.0 + r)
    v = 2.0 * np.pi / (1.0 + r)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = (2.0 / 3.0) * (
            np.sin(u) / (2.0 * np.pi * r * r)
            + 1.0 / (1.0 + r) ** 2
            + np.sin(v) / (2.0 * np.pi)
            - np.cos(v) / (1.0 + r)
            - np.cos(u) / (r * (1.0 + r))
        )
    # the 1/r terms cancel analytically; the density vanishes linearly at 0
    return np.where(r == 0.0, 0.0, val)


_DENSITIES = {"poisson": _poisson_density, "goe": _goe_density, "coe": _coe_density}


def reference_density(kind: str, r):
    """Reference gap-ratio density at r (scalar or array), r in [0, 1]."""
    if kind not in REFERENCE_KINDS:
        raise ValueError(f"kind must be one of {REFERENCE_KINDS}, got {kind!r}")
    arr = np.asarray(r, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError("r must lie in [0, 1]")
    out = _DENSITIES[kind](arr)
    return float(out) if np.isscalar(r) or arr.ndim == 0 else out


def mean_gap_ratio(sample) -> float:
    """Mean ratio of a sample, or the first moment of a reference density.

    Accepts a GapRatioSample, an array of ratios, or one of REFERENCE_KINDS
    (computed by adaptive quadrature of r * P(r)).
    """
    if isinstance(sample, str):
        value, _ = quad(lambda r: r * reference_density(sample, r), 0.0, 1.0, limit=200)
        return value
    ratios = sample.ratios if isinstance(sample, GapRatioSample) else np.asarray(sample)
    if len(ratios) == 0:
        raise ValueError("empty ratio sample")
    return float(np.mean(ratios))


def participation_ratio(psi: np.ndarray) -> float:
    """1 / sum_l |C_l|^4: how many configurations a normalized state occupies."""
    psi = np.asarray(psi, dtype=complex)
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > 1e-9:
        raise ValidationError(f"state norm {norm} deviates from 1 beyond 1e-9")
    return float(1.0 / np.sum(np.abs(psi) ** 4))


def fractal_dimension(p: float, dim: int) -> float:
    """ln P / ln D, mapping participation ratio onto [0, 1]."""
    if dim < 2:
        raise ValueError(f"dimension must be >= 2, got {dim}")
    if not (1.0 - 1e-9 <= p <= dim * (1.0 + 1e-9)):
        raise ValueError(f"participation ratio {p} outside [1, {dim}]")
    p = min(max(p, 1.0), float(dim))
    return float(np.log(p) / np.log(dim))


def state_fractal_dimensions(result: FloquetResult) -> np.ndarray:
    """Fractal dimension of every Floquet state, in quasienergy order."""
    d = result.states.shape[0]
    participation = 1.0 / np.sum(np.abs(result.states) ** 4, axis=0)
    participation = np.clip(participation, 1.0, float(d))
    return np.log(participation) / np.log(d)


def floquet_state_map(result: FloquetResult) -> np.ndarray:
    """|C_{alpha,l}|^2 as a (configuration x state) matrix; columns sum to 1."""
    return np.abs(result.states) ** 2


@dataclass
class HistogramData:
    """Density-normalized histogram on uniform bins over [0, 1]."""

    edges: np.ndarray
    counts: np.ndarray
    density: np.ndarray

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])


def ratio_histogram(ratios: np.ndarray, bins: int = 20) -> HistogramData:
    """Histogram of gap ratios on uniform bins over [0, 1]."""
    if bins < 1:
        raise ValueError("bins must be >= 1")
    counts, edges = np.histogram(np.asarray(ratios, dtype=float), bins=bins, range=(0.0, 1.0))
    total = counts.sum()
    width = edges[1] - edges[0]
    density = counts / (total * width) if total > 0 else counts.astype(float)
    return HistogramData(edges=edges, counts=counts, density=density)
