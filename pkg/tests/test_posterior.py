import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from noisyodds.beliefs import belief_envelope
from noisyodds.errors import DegenerateDistributionError, DomainError
from noisyodds.posterior import (PosteriorDensity, Variant, consensus_density,
                                 definetti_pt_density, pt_density_given_pc,
                                 pt_support, smooth_pieces)

GRID = [(0.1, 0.5), (0.3, 0.5), (0.5, 0.5), (0.7, 0.5), (0.9, 0.5),
        (0.1, 1.0), (0.3, 1.0), (0.5, 1.0), (0.75, 1.0),
        (0.2, 0.25), (0.5, 0.25), (0.8, 0.25), (0.4, 0.8), (0.6, 0.8)]


# ---------------------------------------------------------------- consensus

def test_consensus_density_is_triangular():
    env = belief_envelope(0.3, 0.5)
    assert consensus_density(env.l - 0.01, env) == 0.0
    assert consensus_density(env.h + 0.01, env) == 0.0
    # peak at the mode p_t, value 2/width
    assert consensus_density(env.p_t, env) == pytest.approx(2.0 / env.width, abs=1e-9)
    total = quad(consensus_density, env.l, env.h, args=(env,), epsabs=1e-12,
                 points=[env.p_t])[0]
    assert total == pytest.approx(1.0, abs=1e-9)


def test_consensus_density_matches_histogram():
    env = belief_envelope(0.4, 0.8)
    rng = np.random.default_rng(3)
    draws = 0.5 * (rng.uniform(env.l, env.h, 400_000)
                   + rng.uniform(env.l, env.h, 400_000))
    hist, edges = np.histogram(draws, bins=40, range=(env.l, env.h), density=True)
    mids = 0.5 * (edges[:-1] + edges[1:])
    expected = np.array([consensus_density(float(x), env) for x in mids])
    assert np.abs(hist - expected).max() < 0.15


def test_consensus_density_degenerate():
    with pytest.raises(DegenerateDistributionError):
        consensus_density(0.3, belief_envelope(0.3, 0.0))


# ---------------------------------------------------------------- support

@settings(max_examples=200)
@given(st.floats(min_value=0.01, max_value=0.99),
       st.floats(min_value=0.05, max_value=1.0),
       st.floats(min_value=0.001, max_value=0.999))
def test_support_is_envelope_membership(p_c, epsilon, p_t):
    lo, hi = pt_support(p_c, epsilon)
    env = belief_envelope(p_t, epsilon)
    inside_support = lo <= p_t <= hi
    inside_envelope = env.l <= p_c <= env.h
    if abs(p_t - lo) > 1e-9 and abs(p_t - hi) > 1e-9:
        assert inside_support == inside_envelope


def test_support_maximal_noise():
    lo, hi = pt_support(0.3, 1.0)
    assert lo == pytest.approx(0.15, abs=1e-15)
    assert hi == pytest.approx(0.65, abs=1e-15)


# ---------------------------------------------------------------- slices

@pytest.mark.parametrize("p_c,epsilon", GRID)
def test_slice_equals_consensus_density_cross_section(p_c, epsilon):
    """The slice of the stacked triangular distributions at p_c must equal
    the triangular density of the consensus evaluated at p_c, as a
    function of p_t — an independent reconstruction of the same object."""
    lo, hi = pt_support(p_c, epsilon)
    for t in np.linspace(lo + 1e-6, hi - 1e-6, 23):
        env = belief_envelope(float(t), epsilon)
        expected = consensus_density(p_c, env)
        assert pt_density_given_pc(float(t), p_c, epsilon) == pytest.approx(
            expected, rel=1e-9, abs=1e-9)


@pytest.mark.parametrize("p_c,epsilon", GRID)
def test_definetti_slice_is_uniform_quote_cross_section(p_c, epsilon):
    lo, hi = pt_support(p_c, epsilon)
    for t in np.linspace(lo + 1e-6, hi - 1e-6, 23):
        env = belief_envelope(float(t), epsilon)
        expected = 1.0 / env.width if env.l <= p_c <= env.h else 0.0
        assert definetti_pt_density(float(t), p_c, epsilon) == pytest.approx(
            expected, rel=1e-9, abs=1e-9)


def test_slice_zero_outside_support():
    lo, hi = pt_support(0.3, 0.5)
    assert pt_density_given_pc(lo - 1e-6, 0.3, 0.5) == 0.0
    assert pt_density_given_pc(hi + 1e-6, 0.3, 0.5) == 0.0
    assert definetti_pt_density(lo - 1e-6, 0.3, 0.5) == 0.0


def test_slice_validation():
    with pytest.raises(DomainError):
        pt_density_given_pc(0.3, 0.3, 0.0)
    with pytest.raises(DegenerateDistributionError):
        pt_density_given_pc(0.3, 0.0, 0.5)
    with pytest.raises(DegenerateDistributionError):
        pt_density_given_pc(0.3, 1.0, 0.5)


def test_smooth_pieces_cover_support():
    pieces = smooth_pieces(0.4, 0.5)
    lo, hi = pt_support(0.4, 0.5)
    assert pieces[0][0] == lo
    assert pieces[-1][1] == hi
    for (a, b), (c, d) in zip(pieces[:-1], pieces[1:]):
        assert b == c
        assert a < b


# ---------------------------------------------------------------- normalization

def _gauss_integral(dens, n_nodes=80):
    """Independent normalization oracle: fixed-order Gauss-Legendre on each
    smooth piece (no adaptive quadrature shared with the implementation)."""
    nodes, weights = np.polynomial.legendre.leggauss(n_nodes)
    total = 0.0
    for a, b in smooth_pieces(dens.p_c, dens.epsilon):
        x = 0.5 * (b - a) * nodes + 0.5 * (a + b)
        total += 0.5 * (b - a) * sum(w * dens.pdf(float(t))
                                     for w, t in zip(weights, x))
    return total


@pytest.mark.parametrize("p_c,epsilon", GRID)
@pytest.mark.parametrize("variant", list(Variant))
def test_normalized_density_integrates_to_one(p_c, epsilon, variant):
    dens = PosteriorDensity(p_c, epsilon, variant)
    assert _gauss_integral(dens) == pytest.approx(1.0, abs=1e-9)


def test_unnormalized_slice_mass_differs_from_one():
    # the raw piecewise slice is a likelihood cross-section, not a
    # probability density; its mass is the normalization constant
    dens = PosteriorDensity(0.5, 1.0, Variant.BASIC_GAME)
    assert dens.normalization == pytest.approx(4 * np.log(2) - 2, abs=1e-9)
    assert abs(dens.normalization - 1.0) > 0.1
    dens2 = PosteriorDensity(0.5, 1.0, Variant.DE_FINETTI)
    assert dens2.normalization == pytest.approx(np.log(2), abs=1e-9)


def test_bin_probability_partition_sums_to_one():
    dens = PosteriorDensity(0.3, 0.5, Variant.BASIC_GAME)
    edges = np.linspace(dens.support_lo, dens.support_hi, 21)
    total = sum(dens.bin_probability(float(a), float(b))
                for a, b in zip(edges[:-1], edges[1:]))
    assert total == pytest.approx(1.0, abs=1e-10)
    assert dens.bin_probability(0.0, dens.support_lo) == 0.0


def test_posterior_matches_simulation_histogram():
    from noisyodds.montecarlo import posterior_histogram
    dens = PosteriorDensity(0.4, 0.8, Variant.BASIC_GAME)
    edges, counts, n = posterior_histogram(0.4, 0.8, 2_000_000, 12, n_bins=25)
    expected = np.array([dens.bin_probability(float(a), float(b))
                         for a, b in zip(edges[:-1], edges[1:])])
    assert n > 10_000
    assert np.abs(counts / n - expected).max() < 0.02
