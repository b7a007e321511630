"""Densities induced by noisy beliefs.

Two directions: the consensus given the truth (symmetric triangular for
the averaged basic game, uniform for the De Finetti quote), and the truth
given an observed consensus, obtained by slicing the stack of those
distributions across a uniform prior on p_t.

The sliced piecewise forms are likelihood slices f(p_c | p_t) and do not
integrate to one over p_t; :class:`PosteriorDensity` carries the
quadrature normalisation so it is a proper density.  The mean-margin
systems in :mod:`noisyodds.fairsolver` deliberately weight by the
unnormalised slice, which leaves their zeros (the fair adjustments)
unchanged.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

from scipy.integrate import quad

from .beliefs import BeliefEnvelope
from .errors import DegenerateDistributionError, DomainError


class Variant(enum.Enum):
    BASIC_GAME = "basic-game"
    DE_FINETTI = "de-finetti"


def consensus_density(p_c_value: float, env: BeliefEnvelope) -> float:
    """Symmetric triangular density of the equal-weight consensus on [l, h]."""
    if env.degenerate:
        raise DegenerateDistributionError("zero-width envelope: consensus is a point mass")
    if p_c_value < env.l or p_c_value > env.h:
        return 0.0
    half = env.width / 2.0
    if p_c_value <= env.p_t:
        return (p_c_value - env.l) / (half * half)
    return (env.h - p_c_value) / (half * half)


def _validate(p_c: float, epsilon: float) -> None:
    if not 0.0 < epsilon <= 1.0:
        raise DomainError(f"epsilon must lie in (0, 1], got {epsilon}")
    if not 0.0 < p_c < 1.0:
        raise DegenerateDistributionError(
            f"the truth given consensus {p_c} is a point mass, not a density"
        )


def pt_support(p_c: float, epsilon: float) -> tuple[float, float]:
    """Interval of p_t whose envelope [L(p_t), H(p_t)] contains p_c."""
    _validate(p_c, epsilon)
    lo = p_c / (1.0 + epsilon)
    hi = (p_c + epsilon) / (1.0 + epsilon)
    if epsilon < 1.0:
        lo = max(lo, (p_c - epsilon) / (1.0 - epsilon))
        hi = min(hi, p_c / (1.0 - epsilon))
    return lo, hi


def pt_density_given_pc(p_t_value: float, p_c: float, epsilon: float) -> float:
    """Piecewise slice of the stacked triangular consensus distributions.

    Unnormalised; see module docstring.  Total in p_t_value: zero outside
    the support.
    """
    _validate(p_c, epsilon)
    if p_t_value <= 0.0 or p_t_value >= 1.0:
        return 0.0
    lo, hi = pt_support(p_c, epsilon)
    if p_t_value < lo or p_t_value > hi:
        return 0.0
    e2 = epsilon * epsilon
    if 2.0 * epsilon * p_t_value < epsilon:
        den = e2 * p_t_value * p_t_value
        if p_t_value >= p_c:
            return ((epsilon - 1.0) * p_t_value + p_c) / den
        return ((epsilon + 1.0) * p_t_value - p_c) / den
    den = e2 * (p_t_value - 1.0) ** 2
    if p_t_value >= p_c:
        return (epsilon - (epsilon + 1.0) * p_t_value + p_c) / den
    return (epsilon + (1.0 - epsilon) * p_t_value - p_c) / den


def definetti_pt_density(p_t_value: float, p_c: float, epsilon: float) -> float:
    """Slice of the stacked uniform quote distributions (all weight on the
    subject's probability).  Unnormalised, like its basic-game sibling."""
    _validate(p_c, epsilon)
    if p_t_value <= 0.0 or p_t_value >= 1.0:
        return 0.0
    lo, hi = pt_support(p_c, epsilon)
    if p_t_value < lo or p_t_value > hi:
        return 0.0
    if 2.0 * epsilon * p_t_value >= epsilon:
        return 1.0 / (2.0 * epsilon * (1.0 - p_t_value))
    return 1.0 / (2.0 * epsilon * p_t_value)


def slice_density(variant: Variant):
    return pt_density_given_pc if variant is Variant.BASIC_GAME else definetti_pt_density


def smooth_pieces(p_c: float, epsilon: float) -> list[tuple[float, float]]:
    """Sub-intervals of the support on which the slice is smooth."""
    lo, hi = pt_support(p_c, epsilon)
    cuts = sorted({lo, hi} | {x for x in (p_c, 0.5) if lo < x < hi})
    return list(zip(cuts[:-1], cuts[1:]))


@dataclass(frozen=True)
class PosteriorDensity:
    """Normalised density of p_t given an observed consensus p_c."""

    p_c: float
    epsilon: float
    variant: Variant
    support_lo: float = field(init=False)
    support_hi: float = field(init=False)
    normalization: float = field(init=False)

    def __post_init__(self):
        lo, hi = pt_support(self.p_c, self.epsilon)
        f = slice_density(self.variant)
        z = sum(
            quad(f, a, b, args=(self.p_c, self.epsilon), epsabs=1e-12, limit=200)[0]
            for a, b in smooth_pieces(self.p_c, self.epsilon)
        )
        object.__setattr__(self, "support_lo", lo)
        object.__setattr__(self, "support_hi", hi)
        object.__setattr__(self, "normalization", z)

    def unnormalized(self, p_t_value: float) -> float:
        return slice_density(self.variant)(p_t_value, self.p_c, self.epsilon)

    def pdf(self, p_t_value: float) -> float:
        return self.unnormalized(p_t_value) / self.normalization

    def bin_probability(self, a: float, b: float) -> float:
        """Exact probability mass on [a, b] by piecewise quadrature."""
        f = slice_density(self.variant)
        a = max(a, self.support_lo)
        b = min(b, self.support_hi)
        if b <= a:
            return 0.0
        cuts = sorted({a, b} | {x for x in (self.p_c, 0.5) if a < x < b})
        mass = sum(
            quad(f, lo, hi, args=(self.p_c, self.epsilon), epsabs=1e-12, limit=200)[0]
            for lo, hi in zip(cuts[:-1], cuts[1:])
        )
        return mass / self.normalization
