import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from dtcmorph.diagnostics import (
    fractal_dimension,
    floquet_state_map,
    gap_ratios,
    mean_gap_ratio,
    participation_ratio,
    ratio_histogram,
    reference_density,
    state_fractal_dimensions,
)
from dtcmorph.errors import ValidationError
from dtcmorph.floquet import diagonalize_floquet, fast_floquet_operator
from dtcmorph.hamiltonians import default_params, sample_disorder


# --- gap ratios ---------------------------------------------------------


def test_gap_ratios_equally_spaced():
    sample = gap_ratios(np.array([0.0, 1.0, 2.0, 3.0]))
    assert np.allclose(sample.ratios, 1.0)


def test_gap_ratios_hand_value():
    sample = gap_ratios(np.array([0.0, 1.0, 3.0]))
    assert np.allclose(sample.ratios, [0.5])


def test_gap_ratios_count_contract():
    eps = np.sort(np.random.default_rng(0).uniform(-np.pi, np.pi, 256))
    assert len(gap_ratios(eps).ratios) == 254


def test_gap_ratios_degenerate_rules():
    # double zero gap pins the ratio to 1, a single zero gap to 0
    both = gap_ratios(np.array([1.0, 1.0, 1.0]))
    assert both.ratios[0] == 1.0
    assert both.double_degenerate == 1
    single = gap_ratios(np.array([1.0, 1.0, 2.0]))
    assert single.ratios[0] == 0.0
    assert single.single_degenerate == 1


def test_gap_ratios_rejects_unsorted_or_short():
    with pytest.raises(ValueError):
        gap_ratios(np.array([0.0, 2.0, 1.0]))
    with pytest.raises(ValueError):
        gap_ratios(np.array([0.0, 1.0]))


@settings(max_examples=30, deadline=None)
@given(
    seed=st.integers(0, 2**32 - 1),
    shift=st.floats(-10, 10),
    scale=st.floats(0.01, 100),
)
def test_gap_ratios_translation_and_scale_invariance(seed, shift, scale):
    eps = np.sort(np.random.default_rng(seed).uniform(0, 1, 32))
    base = gap_ratios(eps).ratios
    shifted = gap_ratios(eps + shift).ratios
    scaled = gap_ratios(eps * scale).ratios
    assert np.allclose(base, shifted, atol=1e-7)
    assert np.allclose(base, scaled, atol=1e-9)
    assert np.all(base >= 0.0) and np.all(base <= 1.0)


# --- reference densities -------------------------------------------------


def test_density_values_at_zero():
    assert reference_density("poisson", 0.0) == pytest.approx(2.0)
    assert reference_density("goe", 0.0) == pytest.approx(0.0)
    assert reference_density("coe", 0.0) == pytest.approx(0.0)


def test_coe_density_value_at_one():
    # closed form gives exactly 5/6 at r = 1
    assert reference_density("coe", 1.0) == pytest.approx(5.0 / 6.0, abs=1e-12)


@pytest.mark.parametrize("kind", ["poisson", "goe", "coe"])
def test_densities_normalized(kind):
    integral, _ = quad(lambda r: reference_density(kind, r), 0.0, 1.0, limit=200)
    assert abs(integral - 1.0) < 1e-6


@pytest.mark.parametrize("kind", ["poisson", "goe", "coe"])
def test_densities_nonnegative(kind):
    grid = np.linspace(0.0, 1.0, 501)
    assert np.all(reference_density(kind, grid) >= -1e-12)


def test_coe_density_matches_surmise_integral():
    # independent oracle: quadrature of the 3-eigenphase circular-ensemble
    # surmise integrand s*sin(rs/2)*sin(s/2)*sin((1+r)s/2) over its support
    def direct(r):
        upper = 2 * np.pi / (1 + r)
        val, _ = quad(
            lambda s: s * np.sin(r * s / 2) * np.sin(s / 2) * np.sin((1 + r) * s / 2),
            0.0,
            upper,
        )
        return val

    norm, _ = quad(direct, 0.0, 1.0, limit=200)
    for r in (0.05, 0.2, 0.5, 0.8, 1.0):
        assert reference_density("coe", r) == pytest.approx(direct(r) / norm, abs=1e-9)


def test_density_rejects_bad_input():
    with pytest.raises(ValueError):
        reference_density("poisson", 1.5)
    with pytest.raises(ValueError):
        reference_density("gue", 0.5)


def test_mean_gap_ratio_references():
    assert mean_gap_ratio("poisson") == pytest.approx(2 * np.log(2) - 1, abs=1e-9)
    assert mean_gap_ratio("goe") == pytest.approx(4 - 2 * np.sqrt(3), abs=1e-9)
    # quadrature constant of the circular-orthogonal surmise, pinned
    assert mean_gap_ratio("coe") == pytest.approx(0.5269216860, abs=1e-6)


def test_mean_gap_ratio_sample():
    assert mean_gap_ratio(np.array([0.5, 1.0])) == pytest.approx(0.75)
    assert mean_gap_ratio(gap_ratios(np.array([0.0, 1.0, 3.0]))) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        mean_gap_ratio(np.array([]))


# --- participation ratio and fractal dimension ---------------------------


def test_participation_ratio_limits():
    d = 16
    basis = np.zeros(d, dtype=complex)
    basis[3] = 1.0
    assert participation_ratio(basis) == pytest.approx(1.0)
    uniform = np.full(d, 1 / np.sqrt(d), dtype=complex)
    assert participation_ratio(uniform) == pytest.approx(d)
    pair = np.zeros(d, dtype=complex)
    pair[[1, 5]] = 1 / np.sqrt(2)
    assert participation_ratio(pair) == pytest.approx(2.0)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), phase=st.floats(0, 2 * np.pi))
def test_participation_ratio_invariances(seed, phase):
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=16) + 1j * rng.normal(size=16)
    psi /= np.linalg.norm(psi)
    base = participation_ratio(psi)
    assert participation_ratio(psi[rng.permutation(16)]) == pytest.approx(base)
    assert participation_ratio(np.exp(1j * phase) * psi) == pytest.approx(base)


def test_participation_ratio_rejects_unnormalized():
    with pytest.raises(ValidationError):
        participation_ratio(np.ones(4, dtype=complex))


def test_fractal_dimension_limits():
    assert fractal_dimension(1.0, 256) == 0.0
    assert fractal_dimension(256.0, 256) == pytest.approx(1.0)
    assert fractal_dimension(16.0, 256) == pytest.approx(0.5)


def test_fractal_dimension_monotone():
    values = [fractal_dimension(p, 64) for p in np.linspace(1, 64, 20)]
    assert np.all(np.diff(values) > 0)


def test_fractal_dimension_rejects_out_of_range():
    with pytest.raises(ValueError):
        fractal_dimension(0.5, 16)
    with pytest.raises(ValueError):
        fractal_dimension(20.0, 16)
    with pytest.raises(ValueError):
        fractal_dimension(1.0, 1)


# --- state map ------------------------------------------------------------


def test_state_map_identity():
    res = diagonalize_floquet(np.eye(8, dtype=complex), 1.0)
    assert np.allclose(floquet_state_map(res), np.eye(8))


def test_state_map_columns_normalized():
    p = default_params(6, 0.5)
    res = diagonalize_floquet(
        fast_floquet_operator(p, sample_disorder(p, 3)), p.period
    )
    prob_map = floquet_state_map(res)
    assert prob_map.shape == (64, 64)
    assert np.all(prob_map >= 0)
    assert np.allclose(prob_map.sum(axis=0), 1.0, atol=1e-9)


def test_melted_states_more_fractal_than_crystal():
    seed = 14
    means = {}
    for lam in (0.001, 0.5):
        p = default_params(8, lam)
        res = diagonalize_floquet(
            fast_floquet_operator(p, sample_disorder(p, seed)), p.period
        )
        means[lam] = float(np.mean(state_fractal_dimensions(res)))
    assert means[0.5] > means[0.001]


# --- histograms ------------------------------------------------------------


def test_ratio_histogram_density_normalized():
    rng = np.random.default_rng(8)
    hist = ratio_histogram(rng.uniform(0, 1, 500), bins=20)
    width = hist.edges[1] - hist.edges[0]
    assert hist.density.sum() * width == pytest.approx(1.0, abs=1e-9)
    assert len(hist.counts) == 20
    assert hist.counts.sum() == 500


def test_ratio_histogram_empty():
    hist = ratio_histogram(np.array([]), bins=10)
    assert hist.counts.sum() == 0
    assert np.all(hist.density == 0.0)
