"""One-period propagators, quasienergy spectra and the effective Hamiltonian.

The drive is piecewise constant, so the one-period operator is the ordered
product F = U3 U2 U1 of segment propagators (segment 1 acts first, hence
rightmost). Two construction routes are provided:

* `floquet_operator` exponentiates the dense segment Hamiltonians; it is the
  slow, structure-free oracle;
* `fast_floquet_operator` exploits the segment structure (single-site
  rotations, diagonal phases, commuting 4x4 dimer blocks) and must agree with
  the dense route to 1e-10.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import backend
from .errors import ValidationError
from .hamiltonians import (
    DisorderRealization,
    ModelParams,
    build_h1,
    build_h2,
    build_h3,
    dimer_block,
    dimer_sites,
    h2_diagonal,
)
from .spins import max_hermiticity_defect, max_unitarity_defect

HERMITICITY_TOL = 1e-10
UNITARITY_TOL = 1e-10


@dataclass
class FloquetResult:
    """Diagonalized one-period propagator.

    `states` holds the orthonormal eigenvectors as columns, ordered like the
    ascending `quasienergies`; ties are broken by the index of the dominant
    configuration so degenerate clusters have a reproducible order.
    """

    operator: np.ndarray
    quasienergies: np.ndarray
    states: np.ndarray
    period: float

    @property
    def eigenvalues(self) -> np.ndarray:
        """Unit-circle eigenvalues exp(-i*eps*T) matching `quasienergies`."""
        return np.exp(-1j * self.quasienergies * self.period)


def propagator(h: np.ndarray, duration: float) -> np.ndarray:
    """exp(-i*h*duration) through a Hermitian eigendecomposition."""
    if duration < 0:
        raise ValueError(f"duration must be nonnegative, got {duration}")
    defect = max_hermiticity_defect(h)
    if defect > HERMITICITY_TOL:
        raise ValidationError(
            f"matrix deviates from Hermitian by {defect:.3e} (tol {HERMITICITY_TOL})"
        )
    h = 0.5 * (h + h.conj().T)  # scrub accumulated round-off
    energies, modes = np.linalg.eigh(h)
    return (modes * np.exp(-1j * energies * duration)) @ modes.conj().T


def floquet_operator(
    params: ModelParams, disorder: DisorderRealization
) -> np.ndarray:
    """One-period propagator from dense segment exponentials (oracle route)."""
    u1 = propagator(build_h1(params), params.t1)
    u2 = propagator(build_h2(params, disorder), params.t2)
    u3 = propagator(build_h3(params, disorder), params.t3)
    return u3 @ u2 @ u1


def _site_rotation(theta: float) -> np.ndarray:
    """exp(-i*theta*sigma^x) in closed form."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -1j * s], [-1j * s, c]])


def fast_floquet_operator(
    params: ModelParams, disorder: DisorderRealization
) -> np.ndarray:
    """One-period propagator built from the segment structure.

    Segment 1 is applied as N single-site rotations, segment 2 as elementwise
    diagonal phases (no dense exponential), segment 3 as 4x4 exponentials of
    the mutually commuting dimer blocks.
    """
    if len(disorder.w) != params.n_sites:
        raise ValueError(
            f"disorder has {len(disorder.w)} fields for {params.n_sites} sites"
        )
    d = params.dim
    mat = np.eye(d, dtype=complex)
    for site in range(1, params.n_sites + 1):
        strength = params.g if site % 2 == 1 else params.lam * params.g
        backend.apply_site_gate(mat, site - 1, _site_rotation(strength * params.t1))
    mat *= np.exp(-1j * params.t2 * h2_diagonal(params, disorder))[:, None]
    for k, (a, _b) in enumerate(dimer_sites(params.n_sites), start=1):
        gate = propagator(dimer_block(params, disorder, k), params.t3)
        backend.apply_pair_gate(mat, a - 1, gate)
    return mat


def diagonalize_floquet(f: np.ndarray, period: float) -> FloquetResult:
    """Quasienergies and Floquet states of a unitary one-period propagator.

    Quasienergies are -arg(eigenvalue)/period folded onto the principal
    branch (-pi/period, pi/period]. A complex Schur decomposition is used so
    the eigenbasis stays orthonormal inside degenerate clusters.
    """
    defect = max_unitarity_defect(f)
    if defect > UNITARITY_TOL:
        raise ValidationError(
            f"matrix deviates from unitary by {defect:.3e} (tol {UNITARITY_TOL})"
        )
    upper, vectors = scipy.linalg.schur(np.asarray(f, dtype=complex), output="complex")
    eps = -np.angle(np.diag(upper)) / period
    edge = np.pi / period
    eps = np.where(eps <= -edge, eps + 2.0 * edge, eps)
    dominant = np.argmax(np.abs(vectors), axis=0)
    order = np.lexsort((dominant, eps))
    return FloquetResult(
        operator=np.asarray(f, dtype=complex),
        quasienergies=eps[order],
        states=vectors[:, order],
        period=period,
    )


def effective_hamiltonian(result: FloquetResult) -> np.ndarray:
    """Hermitian generator with F = exp(-i*H_eff*T), from the principal branch."""
    h = (result.states * result.quasienergies) @ result.states.conj().T
    return 0.5 * (h + h.conj().T)


def sparsity_fraction(mat: np.ndarray, rel_threshold: float = 1e-3) -> float:
    """Fraction of entries with magnitude above rel_threshold * max |entry|."""
    mags = np.abs(mat)
    peak = mags.max()
    if peak == 0.0:
        return 0.0
    return float(np.mean(mags > rel_threshold * peak))
