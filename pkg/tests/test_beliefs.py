import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from noisyodds.beliefs import (LN10, BeliefEnvelope, belief_envelope,
                               probability_to_woe, rhombus_bounds,
                               sample_belief, woe_cdf, woe_pdf,
                               woe_to_probability)
from noisyodds.errors import DegenerateDistributionError, DomainError

probabilities = st.floats(min_value=1e-9, max_value=1 - 1e-9,
                          allow_nan=False, allow_infinity=False)
unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


def test_woe_known_values():
    assert woe_to_probability(0.0) == 0.5
    assert woe_to_probability(1.0) == pytest.approx(10.0 / 11.0, abs=1e-15)
    assert woe_to_probability(-1.0) == pytest.approx(1.0 / 11.0, abs=1e-15)
    # one ban of evidence multiplies the odds by ten
    assert probability_to_woe(0.95) == pytest.approx(math.log10(19.0), abs=1e-12)


def test_woe_overflow_safe_tails():
    assert woe_to_probability(400.0) == 1.0
    assert woe_to_probability(-400.0) == 0.0


@given(probabilities)
def test_woe_round_trip(p):
    assert woe_to_probability(probability_to_woe(p)) == pytest.approx(p, rel=1e-12)


@given(st.floats(min_value=-300, max_value=300, allow_nan=False))
def test_complement_pair_sums_to_one(w):
    assert woe_to_probability(w) + woe_to_probability(-w) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("bad", [0.0, 1.0, -0.1, 1.1])
def test_probability_to_woe_domain(bad):
    with pytest.raises(DomainError):
        probability_to_woe(bad)


@pytest.mark.parametrize("bad", [math.inf, -math.inf, math.nan])
def test_woe_to_probability_domain(bad):
    with pytest.raises(DomainError):
        woe_to_probability(bad)


@given(unit, unit)
def test_envelope_basic_properties(p_t, epsilon):
    env = belief_envelope(p_t, epsilon)
    assert env.e == epsilon * min(p_t, 1.0 - p_t)
    assert 0.0 <= env.l <= p_t <= env.h <= 1.0
    assert env.width == pytest.approx(2.0 * env.e, abs=1e-15)


@given(unit, unit)
def test_rhombus_bounds_match_half_width_form(p_t, epsilon):
    env = belief_envelope(p_t, epsilon)
    lo, hi = rhombus_bounds(p_t, epsilon)
    assert lo == pytest.approx(env.l, abs=1e-12)
    assert hi == pytest.approx(env.h, abs=1e-12)


def test_envelope_validation():
    with pytest.raises(DomainError):
        belief_envelope(-0.1, 0.5)
    with pytest.raises(DomainError):
        belief_envelope(0.5, 1.5)


@pytest.mark.parametrize("p_t,epsilon", [(0.3, 0.0), (0.0, 0.7), (1.0, 0.7)])
def test_degenerate_envelopes(p_t, epsilon):
    env = belief_envelope(p_t, epsilon)
    assert env.degenerate
    rng = np.random.default_rng(0)
    assert sample_belief(env, rng) == p_t
    assert np.all(sample_belief(env, rng, 5) == p_t)
    with pytest.raises(DegenerateDistributionError):
        woe_cdf(0.0, env)
    with pytest.raises(DegenerateDistributionError):
        woe_pdf(0.0, env)


def test_sample_belief_unbiased_and_in_range():
    env = belief_envelope(0.3, 0.8)
    rng = np.random.default_rng(7)
    draws = sample_belief(env, rng, 200_000)
    assert np.all((draws >= env.l) & (draws <= env.h))
    se = env.width / math.sqrt(12 * len(draws))
    assert abs(draws.mean() - 0.3) < 4 * se


def test_woe_cdf_against_sampled_evidence():
    env = belief_envelope(0.4, 0.6)
    rng = np.random.default_rng(11)
    draws = sample_belief(env, rng, 200_000)
    woes = np.log10(draws / (1.0 - draws))
    for w in (-0.5, -0.2, 0.0, 0.1):
        frac = float((woes <= w).mean())
        assert woe_cdf(w, env) == pytest.approx(frac, abs=0.01)
    assert woe_cdf(-50.0, env) == 0.0
    assert woe_cdf(50.0, env) == 1.0


def test_woe_pdf_integrates_to_one():
    for p_t, eps in [(0.3, 0.5), (0.5, 1.0), (0.9, 0.4)]:
        env = belief_envelope(p_t, eps)
        w_lo = probability_to_woe(max(env.l, 1e-12))
        w_hi = probability_to_woe(min(env.h, 1.0 - 1e-12))
        total = quad(woe_pdf, w_lo, w_hi, args=(env,), epsabs=1e-10, limit=200)[0]
        assert total == pytest.approx(1.0, abs=1e-8)
        if env.l > 0.0 and env.h < 1.0:
            assert woe_pdf(w_lo - 1.0, env) == 0.0
            assert woe_pdf(w_hi + 1.0, env) == 0.0


def test_woe_pdf_is_cdf_derivative():
    env = belief_envelope(0.35, 0.7)
    h = 1e-6
    for w in (-0.6, -0.3, 0.0):
        fd = (woe_cdf(w + h, env) - woe_cdf(w - h, env)) / (2.0 * h)
        assert woe_pdf(w, env) == pytest.approx(fd, rel=1e-5)


def test_change_of_variables_constant():
    # density per ban = ln(10) p (1-p) / width on the support
    env = belief_envelope(0.5, 1.0)
    p = 0.3
    w = probability_to_woe(p)
    assert woe_pdf(w, env) == pytest.approx(LN10 * p * (1 - p) / env.width, abs=1e-15)
