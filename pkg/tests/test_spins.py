import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dtcmorph.spins import (
    apply_pauli,
    basis_state,
    local_magnetization,
    magnetization_weights,
    total_magnetization,
)


def random_state(n_sites, seed):
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=1 << n_sites) + 1j * rng.normal(size=1 << n_sites)
    return psi / np.linalg.norm(psi)


def test_pauli_x_flips_single_bit():
    psi = basis_state(3, 0)
    out = apply_pauli("x", 1, psi)
    assert np.allclose(out, basis_state(3, 1))


def test_pauli_z_on_up_is_identity():
    psi = basis_state(3, 0)
    out = apply_pauli("z", 1, psi)
    assert np.allclose(out, psi)


def test_pauli_y_sign_convention():
    # sigma^y |0> = i |1>
    psi = basis_state(3, 0)
    out = apply_pauli("y", 1, psi)
    assert np.allclose(out, 1j * basis_state(3, 1))


def test_pauli_y_on_down():
    # sigma^y |1> = -i |0>
    psi = basis_state(2, 1)
    out = apply_pauli("y", 1, psi)
    assert np.allclose(out, -1j * basis_state(2, 0))


@settings(max_examples=40, deadline=None)
@given(
    axis=st.sampled_from(["x", "y", "z"]),
    site=st.integers(1, 4),
    seed=st.integers(0, 2**32 - 1),
)
def test_pauli_squares_to_identity(axis, site, seed):
    psi = random_state(4, seed)
    twice = apply_pauli(axis, site, apply_pauli(axis, site, psi))
    assert np.max(np.abs(twice - psi)) < 1e-12


@settings(max_examples=40, deadline=None)
@given(
    axis=st.sampled_from(["x", "y", "z"]),
    site=st.integers(1, 4),
    seed=st.integers(0, 2**32 - 1),
)
def test_pauli_preserves_norm(axis, site, seed):
    psi = random_state(4, seed)
    out = apply_pauli(axis, site, psi)
    assert abs(np.linalg.norm(out) - 1.0) < 1e-12


@pytest.mark.parametrize("axis", ["x", "y", "z"])
@pytest.mark.parametrize("site", [0, 5, -1])
def test_pauli_site_out_of_range(axis, site):
    with pytest.raises(ValueError):
        apply_pauli(axis, site, basis_state(4, 0))


def test_pauli_bad_axis():
    with pytest.raises(ValueError):
        apply_pauli("q", 1, basis_state(2, 0))


def test_local_magnetization_polarized():
    n = 4
    up = basis_state(n, 0)
    down = basis_state(n, (1 << n) - 1)
    for site in range(1, n + 1):
        assert local_magnetization(up, site) == pytest.approx(1.0)
        assert local_magnetization(down, site) == pytest.approx(-1.0)


def test_local_magnetization_superposition_is_zero():
    # (|0> + |1>)/sqrt(2) on site 1
    psi = (basis_state(2, 0) + basis_state(2, 1)) / np.sqrt(2)
    assert local_magnetization(psi, 1) == pytest.approx(0.0, abs=1e-12)


def test_local_magnetization_site_range():
    with pytest.raises(ValueError):
        local_magnetization(basis_state(2, 0), 3)


def test_total_magnetization_examples():
    assert total_magnetization(basis_state(4, 0)) == pytest.approx(1.0)
    assert total_magnetization(basis_state(4, 0b1111)) == pytest.approx(-1.0)
    # alternating |0101...> has equal up and down counts
    assert total_magnetization(basis_state(4, 0b1010)) == pytest.approx(0.0)


@settings(max_examples=50, deadline=None)
@given(config=st.integers(0, 63))
def test_total_magnetization_counts_bits(config):
    n = 6
    n_down = bin(config).count("1")
    expected = (n - 2 * n_down) / n
    assert total_magnetization(basis_state(n, config)) == expected


def test_magnetization_weights_cached_consistent():
    w = magnetization_weights(5)
    assert w[0] == 1.0
    assert w[-1] == -1.0
    assert len(w) == 32
