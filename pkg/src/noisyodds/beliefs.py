"""Probabilities, noise envelopes and weight-of-evidence transforms.

A belief is a probability produced from accumulated evidence measured in
bans (log10 likelihood-ratio units).  Noisy beliefs are uniform draws on
an envelope [L, H] centred on the true relative frequency, with half-width
E = epsilon * min(p_t, 1 - p_t) so draws never leave [0, 1] and stay
unbiased.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDistributionError, DomainError

LN10 = math.log(10.0)


def woe_to_probability(w: float) -> float:
    """Map a weight of evidence (bans) to the probability of the hypothesis.

    The complement pair always sums to one, so no Dutch book can be made
    against a mechanism quoting both sides.
    """
    if not math.isfinite(w):
        raise DomainError(f"weight of evidence must be finite, got {w}")
    if w >= 0:
        return 1.0 / (10.0 ** (-w) + 1.0)
    t = 10.0 ** w
    return t / (1.0 + t)


def probability_to_woe(p: float) -> float:
    """Inverse of :func:`woe_to_probability` on the open unit interval."""
    if not 0.0 < p < 1.0:
        raise DomainError(f"probability {p} maps to infinite evidence")
    return math.log10(p) - math.log10(1.0 - p)


@dataclass(frozen=True)
class BeliefEnvelope:
    """The uniform noise interval [l, h] around a true frequency p_t."""

    p_t: float
    epsilon: float
    e: float
    l: float
    h: float

    @property
    def width(self) -> float:
        return self.h - self.l

    @property
    def degenerate(self) -> bool:
        return self.l == self.h


def rhombus_bounds(p_t: float, epsilon: float) -> tuple[float, float]:
    """Envelope bounds from the four rhombus edges.

    The same interval as the half-width form, but built from the
    left/top/right/bottom edge lines; used to cross-check the two
    constructions against each other.
    """
    left = (1.0 + epsilon) * p_t
    top = (1.0 - epsilon) * p_t + epsilon
    right = (1.0 + epsilon) * p_t - epsilon
    bottom = (1.0 - epsilon) * p_t
    return max(right, bottom), min(left, top)


def belief_envelope(p_t: float, epsilon: float) -> BeliefEnvelope:
    if not 0.0 <= p_t <= 1.0:
        raise DomainError(f"p_t must lie in [0, 1], got {p_t}")
    if not 0.0 <= epsilon <= 1.0:
        raise DomainError(f"epsilon must lie in [0, 1], got {epsilon}")
    e = epsilon * min(1.0 - p_t, p_t)
    return BeliefEnvelope(p_t=p_t, epsilon=epsilon, e=e, l=p_t - e, h=p_t + e)


def sample_belief(env: BeliefEnvelope, rng: np.random.Generator, size=None):
    """Uniform draw(s) on [l, h]; unbiased for p_t by construction."""
    if env.degenerate:
        if size is None:
            return env.p_t
        return np.full(size, env.p_t)
    return rng.uniform(env.l, env.h, size)


def _require_spread(env: BeliefEnvelope) -> None:
    if env.degenerate:
        raise DegenerateDistributionError(
            "envelope has zero width; the belief is a point mass at p_t"
        )


def woe_cdf(w: float, env: BeliefEnvelope) -> float:
    """CDF of the gathered weight of evidence implied by U(l, h) beliefs."""
    _require_spread(env)
    p = woe_to_probability(w)
    return min(max((p - env.l) / env.width, 0.0), 1.0)


def woe_pdf(w: float, env: BeliefEnvelope) -> float:
    """Density (per ban) of the gathered weight of evidence.

    Change of variables from the uniform belief: dp/dw = ln(10) p (1 - p),
    supported on [woe(l), woe(h)] and zero elsewhere.
    """
    _require_spread(env)
    p = woe_to_probability(w)
    if p < env.l or p > env.h:
        return 0.0
    return LN10 * p * (1.0 - p) / env.width
