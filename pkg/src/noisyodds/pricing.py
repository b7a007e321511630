"""Consensus formation, per-wager margins and their conditional means.

Margins are in stake multiples (one-dollar stakes): at decimal odds o a
buyer wins o - 1 or loses 1; the seller takes the opposite side, so every
settled wager is exactly zero-sum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateDistributionError, DomainError


@dataclass(frozen=True)
class WeightRule:
    """Weight w1 placed on the seller's probability; 1 - w1 on the buyer's."""

    w1: float

    def __post_init__(self):
        if not 0.0 <= self.w1 <= 1.0:
            raise DomainError(f"w1 must lie in [0, 1], got {self.w1}")


EQUAL_WEIGHTS = WeightRule(0.5)


@dataclass(frozen=True)
class ConsensusQuote:
    p_c: float
    odds: float
    rule: WeightRule


def consensus(p_b: float, p_s: float, rule: WeightRule = EQUAL_WEIGHTS) -> ConsensusQuote:
    """Blend the two beliefs into the agreed probability and decimal odds."""
    for name, p in (("p_b", p_b), ("p_s", p_s)):
        if not 0.0 <= p <= 1.0:
            raise DomainError(f"{name} must lie in [0, 1], got {p}")
    p_c = p_b * (1.0 - rule.w1) + p_s * rule.w1
    if p_c <= 0.0:
        raise DegenerateDistributionError("consensus probability is zero; odds are undefined")
    return ConsensusQuote(p_c=p_c, odds=1.0 / p_c, rule=rule)


def buyer_subjective_margin(p_b: float, quote: ConsensusQuote) -> float:
    return (quote.odds - 1.0) * p_b - (1.0 - p_b)


def seller_subjective_margin(p_s: float, quote: ConsensusQuote) -> float:
    return (1.0 - p_s) - (quote.odds - 1.0) * p_s


def seller_objective_margin(p_t: float, p_c_effective: float) -> float:
    """Seller's expected margin when the event truly occurs with rate p_t."""
    if p_c_effective <= 0.0:
        raise DegenerateDistributionError("effective consensus must be positive")
    return (1.0 - p_t) - p_t * (1.0 / p_c_effective - 1.0)


def asymmetry_delta(p_t: float, iota: float) -> float:
    """Literal printed gap between the beneficial and costly mispricing margins.

    As printed this is non-negative on 0 < iota < p_t; see
    :func:`net_asymmetry` for the signed companion that matches the
    economic claim that mispricing never favours the seller on net.
    """
    _check_iota(p_t, iota)
    if iota == 0.0:
        return 0.0
    return -2.0 * iota * p_t / (iota * iota - p_t * p_t)


def net_asymmetry(p_t: float, iota: float) -> float:
    """Sum of the seller's margins under symmetric over- and under-pricing."""
    _check_iota(p_t, iota)
    if iota == 0.0:
        return 0.0
    return -2.0 * iota * iota / (p_t * p_t - iota * iota)


def _check_iota(p_t: float, iota: float) -> None:
    if not 0.0 < p_t <= 1.0:
        raise DomainError(f"p_t must lie in (0, 1], got {p_t}")
    if iota < 0.0 or iota >= p_t:
        raise DomainError(f"iota must satisfy 0 <= iota < p_t, got iota={iota}, p_t={p_t}")


def _mean_margin_factor(u: float, w1: float) -> float:
    """Mean seller margin for a scaled noise level u, conditioned on the
    role rule p_s < p_b.

    Both closed-form branches of the conditional mean reduce to this one
    expression: the below-chance branch at u = epsilon and the
    above-chance branch at u = epsilon * (1 - p_t) / p_t.  Written with
    log1p so the epsilon -> 0 limit cancels to machine precision.
    """
    l0 = math.log1p(u * (1.0 - 2.0 * w1))
    if u >= 1.0:
        t1 = 0.0  # (1 - u) * log1p(-u) -> 0
    else:
        t1 = (1.0 - u) * (math.log1p(-u) - l0) / (1.0 - w1)
    t2 = (1.0 + u) * (math.log1p(u) - l0) / w1
    return 1.0 - (t1 + t2) / (2.0 * u * u)


def conditional_mean_seller_margin(p_t: float, epsilon: float, rule: WeightRule) -> float:
    """Mean of the seller's expected margin over wagers with p_s < p_b.

    Constant in p_t below the point of chance; above it the noise level
    rescales by (1 - p_t) / p_t, driving the margin to zero as p_t -> 1.
    """
    if not 0.0 < p_t < 1.0:
        raise DomainError(f"p_t must lie in (0, 1), got {p_t}")
    if not 0.0 < epsilon <= 1.0:
        raise DomainError(f"epsilon must lie in (0, 1], got {epsilon}")
    if not 0.0 < rule.w1 < 1.0:
        raise DomainError("the closed form is singular at w1 in {0, 1}")
    u = epsilon if p_t < 0.5 else epsilon * (1.0 - p_t) / p_t
    return _mean_margin_factor(u, rule.w1)
