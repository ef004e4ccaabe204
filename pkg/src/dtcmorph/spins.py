"""Computational z-basis for a chain of N two-level systems.

Conventions used throughout the package:

* a configuration is an integer index in [0, 2^N); bit (l-1) of the index
  stores site l, so site 1 is the least-significant bit;
* bit value 0 means sigma^z eigenvalue +1 ("up"), bit value 1 means -1;
* state vectors are dense complex arrays of length 2^N over configurations;
* sites are numbered 1..N.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import ValidationError

PAULI_AXES = ("x", "y", "z")


def dimension(n_sites: int) -> int:
    return 1 << n_sites

def n_sites_of(psi: np.ndarray) -> int:
    """Number of sites for a state vector; rejects non-power-of-two lengths."""
    d = len(psi)
    n = d.bit_length() - 1
    if d < 2 or d != (1 << n):
        raise ValueError(f"state length {d} is not a power of two >= 2")
    return n


def basis_state(n_sites: int, config: int) -> np.ndarray:
    """Unit vector for one z-basis configuration."""
    d = dimension(n_sites)
    if not 0 <= config < d:
        raise ValueError(f"configuration {config} outside [0, {d})")
    psi = np.zeros(d, dtype=complex)
    psi[config] = 1.0
    return psi


def site_sign(config: int, site: int, n_sites: int) -> int:
    """sigma^z eigenvalue (+1 or -1) of one site in a configuration."""
    _check_site(site, n_sites)
    return 1 - 2 * ((config >> (site - 1)) & 1)


@lru_cache(maxsize=None)
def sign_table(n_sites: int) -> np.ndarray:
    """(D, N) array of sigma^z eigenvalues; cached, treat as read-only."""
    idx = np.arange(dimension(n_sites))
    table = 1.0 - 2.0 * ((idx[:, None] >> np.arange(n_sites)[None, :]) & 1)
    table.setflags(write=False)
    return table


@lru_cache(maxsize=None)
def magnetization_weights(n_sites: int) -> np.ndarray:
    """(D,) array of per-configuration mean magnetization (N_up - N_down)/N."""
    weights = sign_table(n_sites).mean(axis=1)
    weights.setflags(write=False)
    return weights


def _check_site(site: int, n_sites: int) -> None:
    if not 1 <= site <= n_sites:
        raise ValueError(f"site {site} outside [1, {n_sites}]")


def apply_pauli(axis: str, site: int, psi: np.ndarray) -> np.ndarray:
    """Apply a single-site Pauli operator, returning a new state vector.

    Sign convention: with |0> the sigma^z=+1 eigenstate, sigma^y|0> = i|1>.
    """
    if axis not in PAULI_AXES:
        raise ValueError(f"axis must be one of {PAULI_AXES}, got {axis!r}")
    psi = np.asarray(psi, dtype=complex)
    n = n_sites_of(psi)
    _check_site(site, n)
    mask = 1 << (site - 1)
    idx = np.arange(len(psi))
    if axis == "z":
        return sign_table(n)[:, site - 1] * psi
    flipped = psi[idx ^ mask]
    if axis == "x":
        return flipped
    # y: amplitude entering a configuration with the bit set picks up +i,
    # with the bit cleared -i
    bit_set = (idx & mask) != 0
    return np.where(bit_set, 1j, -1j) * flipped


def local_magnetization(psi: np.ndarray, site: int) -> float:
    """Expectation value <psi|sigma^z_site|psi>."""
    psi = np.asarray(psi, dtype=complex)
    n = n_sites_of(psi)
    _check_site(site, n)
    return float(sign_table(n)[:, site - 1] @ np.abs(psi) ** 2)


def total_magnetization(psi: np.ndarray) -> float:
    """Site-averaged longitudinal magnetization (1/N) sum_l <sigma^z_l>."""
    psi = np.asarray(psi, dtype=complex)
    n = n_sites_of(psi)
    return float(magnetization_weights(n) @ np.abs(psi) ** 2)


def check_normalized(psi: np.ndarray, tol: float = 1e-9) -> None:
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > tol:
        raise ValidationError(f"state norm {norm} deviates from 1 beyond {tol}")


def max_hermiticity_defect(mat: np.ndarray) -> float:
    """Max-entry norm of (M - M^dagger)."""
    return float(np.max(np.abs(mat - mat.conj().T)))


def max_unitarity_defect(mat: np.ndarray) -> float:
    """Max-entry norm of (M^dagger M - I)."""
    d = mat.shape[0]
    return float(np.max(np.abs(mat.conj().T @ mat - np.eye(d))))
