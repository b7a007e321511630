"""Zero-expectation odds: mean-margin closed forms and fair adjustments.

The seller's mean expected margin at a quoted consensus p_c, against the
slice density of the truth, is

    mean_margin(m) = I0 - I1 / (p_c + m)

with I0 = integral of the slice and I1 = integral of p_t times the slice.
Both integrals have exact closed forms per parameter region (derived by
direct integration and checked against adaptive quadrature); the fair
adjustment solving mean_margin(m) = 0 is m = I1 / I0 - p_c.

The printed nine-segment (basic game) and five-segment (De Finetti)
piecewise systems are kept verbatim in a segment table so each can be
compared against the quadrature oracle; several basic-game segments carry
transcription defects and are reported as documented discrepancies by the
findings sweep, with the closed-form integrals shipping in their place.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .errors import DomainError, NoRegionError, NoRootError
from .posterior import Variant, slice_density, smooth_pieces
from .pricing import WeightRule, _mean_margin_factor, conditional_mean_seller_margin

LN2 = math.log(2.0)

BRACKET_MARGIN = 1e-9          # keeps 0 < p_c + m < 1 and odds finite
PLUGBACK_TOL = 1e-10


def _validate(p_c: float, epsilon: float) -> None:
    if not 0.0 < p_c < 1.0:
        raise DomainError(f"p_c must lie in (0, 1), got {p_c}")
    if not 0.0 < epsilon <= 1.0:
        raise DomainError(f"epsilon must lie in (0, 1], got {epsilon}")


# --------------------------------------------------------------------------
# Closed-form slice integrals
# --------------------------------------------------------------------------

def _basic_low(p_c: float, e: float) -> tuple[float, float]:
    """(I0, I1) for the basic game, p_c <= 1/2."""
    if e == 1.0:
        i0 = 2.0 * LN2 - 2.0 * math.log(1.0 - p_c) - 4.0 * p_c
        i1 = p_c * (-2.0 - 2.0 * LN2 - math.log(p_c)) - (3.0 - p_c) * math.log(1.0 - p_c)
        return i0, i1
    e2 = e * e
    if 2.0 * p_c + e <= 1.0:
        i0 = ((1.0 + e) * math.log(1.0 + e) + (1.0 - e) * math.log(1.0 - e)) / e2
        i1 = -p_c * math.log(1.0 - e2) / e2
        return i0, i1
    i0 = ((1.0 + e) * (2.0 * math.log(1.0 + e) - LN2 - math.log(1.0 - p_c))
          + (1.0 - e) * math.log(2.0 * p_c) + 2.0 - 4.0 * p_c - 2.0 * e) / e2
    i1 = ((p_c - e - 2.0) * math.log(1.0 - p_c) - e - 2.0 * p_c - (e + 2.0) * LN2
          + (e - 2.0 * p_c + 2.0) * math.log(1.0 + e) - p_c * math.log(p_c) + 1.0) / e2
    return i0, i1


def _definetti_low(p_c: float, e: float) -> tuple[float, float]:
    """(I0, I1) for the De Finetti quote, p_c <= 1/2."""
    if e == 1.0:
        i0 = -0.5 * math.log(p_c * (1.0 - p_c))
        i1 = (1.0 - 2.0 * p_c) / 4.0 - 0.5 * math.log(1.0 - p_c)
        return i0, i1
    if 2.0 * p_c + e <= 1.0:
        return math.atanh(e) / e, p_c / (1.0 - e * e)
    i0 = math.log((1.0 + e) ** 2 / (4.0 * p_c * (1.0 - p_c))) / (2.0 * e)
    i1 = ((e + 1.0) / 2.0 * math.log((1.0 + e) / (2.0 * (1.0 - p_c)))
          + 0.5 - p_c) / (e * (e + 1.0))
    return i0, i1


def weight_integrals(p_c: float, epsilon: float, variant: Variant) -> tuple[float, float]:
    """Closed-form (I0, I1) = (integral of slice, integral of p_t * slice).

    The slice is symmetric under (p_c, p_t) -> (1 - p_c, 1 - p_t), so the
    upper half mirrors the lower: I0 is even in p_c - 1/2 and
    I1(p_c) = I0 - I1(1 - p_c).
    """
    _validate(p_c, epsilon)
    low = _basic_low if variant is Variant.BASIC_GAME else _definetti_low
    if p_c <= 0.5:
        return low(p_c, epsilon)
    i0, i1 = low(1.0 - p_c, epsilon)
    return i0, i0 - i1


def _mean_margin(p_c: float, epsilon: float, m: float, variant: Variant) -> float:
    if not 0.0 < p_c + m < 1.0:
        raise DomainError(f"p_c + m must lie in (0, 1), got {p_c + m}")
    i0, i1 = weight_integrals(p_c, epsilon, variant)
    return i0 - i1 / (p_c + m)


def basicgame_mean_margin(p_c: float, epsilon: float, m: float) -> float:
    """Mean seller margin at odds 1/(p_c + m) for the averaged basic game."""
    return _mean_margin(p_c, epsilon, m, Variant.BASIC_GAME)


def definetti_mean_margin(p_c: float, epsilon: float, m: float) -> float:
    """Mean seller margin at odds 1/(p_c + m) for the De Finetti quote."""
    return _mean_margin(p_c, epsilon, m, Variant.DE_FINETTI)


def quadrature_mean_margin(p_c: float, epsilon: float, m: float,
                           variant: Variant = Variant.BASIC_GAME) -> float:
    """Independent oracle: adaptive quadrature of margin times slice."""
    _validate(p_c, epsilon)
    if not 0.0 < p_c + m < 1.0:
        raise DomainError(f"p_c + m must lie in (0, 1), got {p_c + m}")
    f = slice_density(variant)
    q = p_c + m

    def integrand(t: float) -> float:
        return (1.0 - t / q) * f(t, p_c, epsilon)

    return sum(
        quad(integrand, a, b, epsabs=1e-12, limit=200)[0]
        for a, b in smooth_pieces(p_c, epsilon)
    )


# --------------------------------------------------------------------------
# Fair adjustments
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Adjustment:
    """Shift m such that odds 1/(p_c + m) carry zero expectation."""

    p_c: float
    epsilon: float
    m: float
    variant: Variant
    segment_id: str | None
    residual: float
    method: str

    @property
    def fair_probability(self) -> float:
        return self.p_c + self.m

    @property
    def fair_odds(self) -> float:
        return 1.0 / (self.p_c + self.m)


def _solve(p_c: float, epsilon: float, variant: Variant) -> Adjustment:
    _validate(p_c, epsilon)
    i0, i1 = weight_integrals(p_c, epsilon, variant)
    m = i1 / i0 - p_c
    residual = quadrature_mean_margin(p_c, epsilon, m, variant)
    method = "closed-form"
    if abs(residual) >= PLUGBACK_TOL:
        lo = -p_c + BRACKET_MARGIN
        hi = 1.0 - p_c - BRACKET_MARGIN
        f_lo = quadrature_mean_margin(p_c, epsilon, lo, variant)
        f_hi = quadrature_mean_margin(p_c, epsilon, hi, variant)
        if f_lo * f_hi > 0.0:
            raise NoRootError(
                f"mean margin does not change sign on ({lo}, {hi}) "
                f"for p_c={p_c}, epsilon={epsilon}"
            )
        m = brentq(lambda mm: quadrature_mean_margin(p_c, epsilon, mm, variant),
                   lo, hi, xtol=1e-12, rtol=8.9e-16)
        residual = quadrature_mean_margin(p_c, epsilon, m, variant)
        method = "root-finding"
    return Adjustment(p_c=p_c, epsilon=epsilon, m=m, variant=variant,
                      segment_id=segment_id(p_c, epsilon, variant),
                      residual=residual, method=method)


def solve_fair_adjustment(p_c: float, epsilon: float) -> Adjustment:
    return _solve(p_c, epsilon, Variant.BASIC_GAME)


def solve_definetti_adjustment(p_c: float, epsilon: float) -> Adjustment:
    return _solve(p_c, epsilon, Variant.DE_FINETTI)


def fair_adjustment_vector(p_c, epsilon: float,
                           variant: Variant = Variant.BASIC_GAME) -> np.ndarray:
    """Vectorised closed-form m over an array of consensus probabilities."""
    if not 0.0 < epsilon <= 1.0:
        raise DomainError(f"epsilon must lie in (0, 1], got {epsilon}")
    p_c = np.asarray(p_c, dtype=float)
    if np.any((p_c <= 0.0) | (p_c >= 1.0)):
        raise DomainError("all p_c must lie in (0, 1)")
    pl = np.minimum(p_c, 1.0 - p_c)
    e = epsilon
    with np.errstate(divide="ignore", invalid="ignore"):
        if variant is Variant.BASIC_GAME:
            if e == 1.0:
                i0 = 2.0 * LN2 - 2.0 * np.log(1.0 - pl) - 4.0 * pl
                i1 = pl * (-2.0 - 2.0 * LN2 - np.log(pl)) - (3.0 - pl) * np.log(1.0 - pl)
            else:
                e2 = e * e
                i0_int = ((1.0 + e) * math.log(1.0 + e)
                          + (1.0 - e) * math.log(1.0 - e)) / e2
                i1_int = -pl * math.log(1.0 - e2) / e2
                i0_str = ((1.0 + e) * (2.0 * math.log(1.0 + e) - LN2 - np.log(1.0 - pl))
                          + (1.0 - e) * np.log(2.0 * pl) + 2.0 - 4.0 * pl - 2.0 * e) / e2
                i1_str = ((pl - e - 2.0) * np.log(1.0 - pl) - e - 2.0 * pl
                          - (e + 2.0) * LN2 + (e - 2.0 * pl + 2.0) * math.log(1.0 + e)
                          - pl * np.log(pl) + 1.0) / e2
                interior = 2.0 * pl + e <= 1.0
                i0 = np.where(interior, i0_int, i0_str)
                i1 = np.where(interior, i1_int, i1_str)
        else:
            if e == 1.0:
                i0 = -0.5 * np.log(pl * (1.0 - pl))
                i1 = (1.0 - 2.0 * pl) / 4.0 - 0.5 * np.log(1.0 - pl)
            else:
                i0_int = math.atanh(e) / e
                i1_int = pl / (1.0 - e * e)
                i0_str = np.log((1.0 + e) ** 2 / (4.0 * pl * (1.0 - pl))) / (2.0 * e)
                i1_str = ((e + 1.0) / 2.0 * np.log((1.0 + e) / (2.0 * (1.0 - pl)))
                          + 0.5 - pl) / (e * (e + 1.0))
                interior = 2.0 * pl + e <= 1.0
                i0 = np.where(interior, i0_int, i0_str)
                i1 = np.where(interior, i1_int, i1_str)
    upper = p_c > 0.5
    i1 = np.where(upper, i0 - i1, i1)
    return i1 / i0 - p_c


# --------------------------------------------------------------------------
# Numeric fair weight (candidate A)
# --------------------------------------------------------------------------

class W1Star(NamedTuple):
    w1: float
    degenerate: bool


def solve_w1_star(p_t: float, epsilon: float) -> W1Star:
    """Weight on the seller's belief that zeroes the conditional mean margin.

    At epsilon = 0 every weight is a root; returns 1/2 flagged degenerate.
    At the maximal scaled noise level the root sits at the w1 = 0 endpoint
    (all weight on the buyer's belief).
    """
    if not 0.0 < p_t < 1.0:
        raise DomainError(f"p_t must lie in (0, 1), got {p_t}")
    if not 0.0 <= epsilon <= 1.0:
        raise DomainError(f"epsilon must lie in [0, 1], got {epsilon}")
    if epsilon == 0.0:
        return W1Star(0.5, degenerate=True)
    u = epsilon if p_t < 0.5 else epsilon * (1.0 - p_t) / p_t
    if u >= 1.0:
        # Margin is 1 + ln(1 - w1)/w1 < 0 on (0, 1) with limit 0 at w1 -> 0:
        # the root sits at the endpoint (all weight on the buyer's belief).
        return W1Star(0.0, degenerate=False)
    # The margin tends to +u/3 + O(u^2) at w1 -> 0 and -u/3 + O(u^2) at
    # w1 -> 1, so a sign change is guaranteed; offsets below 1e-9 hit
    # cancellation noise in the endpoint evaluations.
    delta = 1e-9
    f_lo = _mean_margin_factor(u, delta)
    f_hi = _mean_margin_factor(u, 1.0 - delta)
    if f_lo * f_hi > 0.0:
        raise NoRootError(f"no fair weight exists for p_t={p_t}, epsilon={epsilon}")
    w1 = brentq(lambda w: _mean_margin_factor(u, w), delta, 1.0 - delta,
                xtol=1e-15, rtol=8.9e-16)
    return W1Star(w1, degenerate=False)


# --------------------------------------------------------------------------
# Printed piecewise systems (kept verbatim for the findings sweep)
# --------------------------------------------------------------------------

BASIC_SEGMENTS = ("i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix")
DEFINETTI_SEGMENTS = ("i", "ii", "iii", "iv", "v")

# Printed basic-game segments that do not reproduce the quadrature oracle
# under any defensible typo reading; the closed-form integrals above are
# authoritative there.
KNOWN_BAD_BASIC_MARGIN = frozenset({"v", "vi", "vii", "ix"})
KNOWN_BAD_BASIC_ADJUSTMENT = frozenset({"iv", "v", "vi", "vii", "ix"})


def segment_id(p_c: float, epsilon: float, variant: Variant) -> str | None:
    """Printed condition table, matched in printed order (first match wins)."""
    _validate(p_c, epsilon)
    pc, e = p_c, epsilon
    if variant is Variant.BASIC_GAME:
        if e + 1 >= 2 * pc and pc <= 0.5 and (
                (0 < e < 0.5 and 2 * pc + e <= 1) or (0.5 <= e < 1 and 2 * pc + e < 1)):
            return "i"
        if 0.5 < pc < 1 and e + 1 < 2 * pc and (
                (2 * pc + e > 1 and e > 0) or (2 * pc + e >= 1 and 2 * e >= 1)):
            return "ii"
        if 2 * pc == 1 and 0 < e < 1:
            return "iii"
        if e + 1 == 2 * pc and 0.5 < pc < 1 and e < 1:
            return "iv"
        if e == 1 and pc <= 0.5:
            return "v"
        if e == 1 and 2 * pc > 1 and pc < 1:
            return "vi"
        if e + 1 > 2 * pc and 2 * pc > 1 and e < 1:
            return "vii"
        if 0.5 <= e < 1 and pc < 0.5 and 2 * pc + e == 1:
            return "viii"
        if e < 1 and 2 * pc < 1 and 2 * pc + e > 1:
            return "ix"
        return None
    if e + 1 >= 2 * pc and (
            (0 < e < 1 / 3 and (2 * pc + e == 1 or 2 * pc + e <= 1)) or
            (3 * e >= 1 and 2 * pc + e < 1)):
        return "i"
    if e + 1 < 2 * pc and pc < 1 and (
            (2 * pc + e > 1 and e > 0) or (2 * pc + e >= 1 and 3 * e >= 1)):
        return "ii"
    if 2 * pc + e > 1 and e < 1 and e + 1 == 2 * pc:
        return "iii"
    if e < 1 and e + 1 > 2 * pc and 2 * pc + e > 1:
        return "iv"
    if 1 / 3 <= e < 1 and e + 1 > 2 * pc and 2 * pc + e == 1:
        return "v"
    return None


def basic_substitutions(p_c: float, epsilon: float) -> dict[str, float]:
    """Printed sub-expression table (a read as epsilon, bare P as P_C, and
    the negative factor inside x12 dropped)."""
    a, pc = epsilon, p_c
    x: dict[str, float] = {}
    x["x1"] = math.log(a + 1.0)
    x["x2"] = math.log(1.0 - a) if a < 1.0 else -math.inf
    x["x3"] = math.log(1.0 - pc)
    x["x4"] = -math.log(pc)
    x["x5"] = -2.0 * math.log(pc)
    x["x6"] = math.log((1.0 - pc) / pc)
    x["x7"] = math.log((a + 1.0) / (pc + 1.0))
    x["x8"] = math.log((1.0 - pc) / (1.0 - a)) if a < 1.0 else math.inf
    x["x9"] = math.log(pc)
    x["x10"] = 4.0 * math.log(pc)
    x["x11"] = LN2
    x["x12"] = math.log((a + 1.0) * (1.0 - pc))
    x["x13"] = math.atanh(2.0 * pc - 1.0)
    x["x14"] = 2.0 * x["x1"] - x["x3"] - x["x9"] - 2.0 * x["x11"] - 2.0
    x["x15"] = 2.0 * x["x3"] + 2.0 * x["x11"] + x["x14"]
    x["x16"] = -x["x3"] - x["x11"] - x["x14"] - 2.0
    return x


def definetti_substitutions(p_c: float, epsilon: float) -> dict[str, float]:
    e, pc = epsilon, p_c
    x: dict[str, float] = {}
    x["x1"] = math.log((1.0 - pc) / (e + 1.0))
    x["x2"] = math.log((1.0 - pc) / pc)
    x["x3"] = math.log(pc / (e + 1.0))
    x["x4"] = math.log((e + 1.0) / pc)
    x["x5"] = LN2
    x["x6"] = math.atanh(e) if e < 1.0 else math.inf
    x["x7"] = -x["x1"] - x["x3"] - 2.0 * x["x5"]
    x["x8"] = 4.0 * x["x5"] - 4.0 * x["x4"]
    return x


def printed_segment_value(p_c: float, epsilon: float, m: float, variant: Variant) -> float:
    """Verbatim evaluation of the matching printed mean-margin segment."""
    seg = segment_id(p_c, epsilon, variant)
    if seg is None:
        raise NoRegionError(f"no printed condition covers p_c={p_c}, epsilon={epsilon}")
    pc, e, q = p_c, epsilon, p_c + m
    if variant is Variant.BASIC_GAME:
        x = basic_substitutions(p_c, epsilon)
        x17 = x["x14"] * q + x["x11"]
        if seg == "i":
            return (((e + 2) * x["x1"] - (e - 2) * x["x2"]) * pc
                    + m * ((e + 1) * x["x1"] - (e - 1) * x["x2"])) / (e * e * q)
        if seg == "ii":
            return (e * (x["x1"] - x["x2"]) * (q - 1)
                    + (x["x1"] + x["x2"]) * (2 * pc + m - 2)) / (e * e * q)
        if seg == "iii":
            return 2 * m * ((e + 1) * x["x1"] - e) / (e * e * q)
        if seg == "iv":
            return (2 * m * (-x["x3"] * pc + x["x9"] * pc + x["x3"])
                    + 2 * x["x11"] * (2 * pc + m - 2)
                    - pc * (2 * x["x6"] * pc - 5 * x["x3"] + x["x9"])
                    - 3 * x["x3"] + x["x5"] / 2) / (e * e * q)
        if seg == "v":
            return (pc * (-2 * pc - 3 * x["x3"] + 3 * x["x11"] + 1)
                    - m * (2 * pc + 2 * x["x3"] - 2 * x["x11"] + 1) + 3 * x["x3"]) / q
        if seg == "vi":
            return (m * (2 * pc + 2 * x["x4"] + 2 * x["x11"] - 3)
                    + pc * (2 * pc + 3 * x["x4"] + 3 * x["x11"] - 3)
                    - 3 * x["x11"] + 1) / q
        if seg == "vii":
            return (e * (-x["x7"] + x17 + 1)
                    + 4 * pc * (pc + m + x["x1"] - x["x13"] - 1)
                    + m * x["x15"] - 2 * x["x11"] - 2 * x["x12"] + 1) / (e * e * q)
        if seg == "viii":
            return (2 * m * x["x16"] * pc
                    + x["x1"] * (2 * m * (pc + 1) + pc * (5 - 2 * pc))
                    + 0.5 * (x["x10"] + 4 * x["x11"]) * pc * pc
                    + x["x16"] * pc) / (e * e * q)
        return (e * (x["x8"] + x17 + 1)
                + 4 * pc * (-pc - m + x["x1"] + x["x13"] + 1)
                + 4 * m * x["x1"] - m * x["x15"] + 2 * x["x8"] + 2 * x["x11"] - 1) / (e * e * q)
    x = definetti_substitutions(p_c, epsilon)
    if seg == "i":
        return (pc / (e * e - 1)) / q + x["x6"] / e
    if seg == "ii":
        return ((pc - 1) / (e * e - 1) + x["x6"] * (q - 1) / e) / q
    if seg == "iii":
        return (2 * pc * x["x2"] * (-m - pc + 1) + 2 * pc - 1) / (4 * e * pc * q)
    if seg == "iv":
        return ((e + 1) * x["x7"] * q + (e + 1) * x["x1"] + (e + 1) * x["x5"]
                + 2 * pc - 1) / (2 * e * (e + 1) * q)
    return (-e + (pc - 1) * x["x8"] * q + 2 * pc - 1) / (4 * e * (e + 1) * q)


def printed_adjustment_value(p_c: float, epsilon: float, variant: Variant) -> float:
    """Verbatim evaluation of the matching printed m segment."""
    seg = segment_id(p_c, epsilon, variant)
    if seg is None:
        raise NoRegionError(f"no printed condition covers p_c={p_c}, epsilon={epsilon}")
    pc, e = p_c, epsilon
    if variant is Variant.BASIC_GAME:
        x = basic_substitutions(p_c, epsilon)
        if seg == "i":
            return ((e - 2) * x["x2"] - (e + 2) * x["x1"]) * pc / (
                (e + 1) * x["x1"] - (e - 1) * x["x2"])
        if seg == "ii":
            return ((e - 2) * x["x2"] - (e + 2) * x["x1"]) * (pc - 1) / (
                (e + 1) * x["x1"] - (e - 1) * x["x2"])
        if seg == "iii":
            return 0.0
        if seg == "iv":
            return (pc * (-4 * x["x6"] * pc + 10 * x["x3"] - 2 * x["x9"])
                    + 8 * x["x11"] * (pc - 1) - 6 * x["x3"] + x["x5"]) / (
                8 * x["x13"] * pc + 4 * x["x3"] + 4 * x["x11"])
        if seg == "v":
            return (pc * (-2 * pc - 3 * x["x3"] + 3 * x["x11"] + 1) + 3 * x["x3"]) / (
                2 * pc + 2 * x["x3"] - 2 * x["x11"] + 1)
        if seg == "vi":
            return (pc * (-2 * pc - 3 * x["x4"] - 3 * x["x11"] + 3) + 3 * x["x11"] - 1) / (
                2 * pc + 2 * x["x4"] + 2 * x["x11"] - 3)
        if seg == "vii":
            return (e * (x["x7"] - x["x11"] - 1) + (-2 * x["x1"] + 2 * x["x13"] + 2) * pc
                    + 2 * x["x11"] + 2 * x["x12"] - 1) / (
                e * (2 * x["x1"] - x["x3"] - x["x9"] - 2 * x["x11"] - 2)
                + 4 * pc + 2 * x["x1"] - 2 * x["x13"] - 2) - pc
        if seg == "viii":
            return pc * (x["x1"] * (6 - 4 * pc) + (x["x10"] + 4 * x["x11"]) * pc
                         + 2 * (x["x9"] + x["x11"])) / (
                4 * x["x1"] * (pc - 1) - 4 * (x["x9"] + x["x11"]) * pc)
        return (e * (x["x8"] + x["x11"] + 1) + (2 * x["x1"] + 2 * x["x13"] + 2) * pc
                + 2 * x["x8"] + 2 * x["x11"] - 1) / (
            e * (-2 * x["x1"] + x["x3"] + x["x9"] + 2 * x["x11"] + 2)
            + 4 * pc - 2 * x["x1"] - 2 * x["x13"] - 2) - pc
    x = definetti_substitutions(p_c, epsilon)
    if seg == "i":
        return pc * ((e * e - 1) * x["x6"] + e) / ((1 - e * e) * x["x6"])
    if seg == "ii":
        return (pc - 1) * ((e * e - 1) * x["x6"] + e) / ((1 - e * e) * x["x6"])
    if seg == "iii":
        return (2 * pc - 1) / (2 * pc * x["x2"]) - pc + 1
    if seg == "iv":
        return -(pc * ((e + 1) * x["x7"] + 2) + (e + 1) * x["x1"]
                 + (e + 1) * x["x5"] - 1) / ((e + 1) * x["x7"])
    return (e - 2 * pc + 1) / ((pc - 1) * x["x8"]) - pc


# --------------------------------------------------------------------------
# Findings sweep
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Finding:
    variant: str
    p_c: float
    epsilon: float
    segment_id: str
    quantity: str
    closed_form: float
    oracle: float
    abs_diff: float
    status: str


FINDING_FIELDS = ("variant", "p_c", "epsilon", "segment_id", "quantity",
                  "closed_form", "oracle", "abs_diff", "status")


def _status(diff: float, tol: float, documented: bool) -> str:
    if diff < tol:
        return "ok"
    return "documented-discrepancy" if documented else "fail"


def oracle_sweep(p_c_grid, eps_grid, abs_tol: float = 1e-6,
                 m_values=(0.0, 0.03, -0.03)) -> list[Finding]:
    """Compare every shipped and printed closed form against the oracles.

    Shipped closed forms must agree with quadrature within abs_tol, or the
    record fails.  Printed segments with known transcription defects are
    recorded as documented discrepancies rather than failures.
    """
    findings: list[Finding] = []
    for variant in (Variant.BASIC_GAME, Variant.DE_FINETTI):
        bad_margin = KNOWN_BAD_BASIC_MARGIN if variant is Variant.BASIC_GAME else frozenset()
        bad_adj = KNOWN_BAD_BASIC_ADJUSTMENT if variant is Variant.BASIC_GAME else frozenset()
        for p_c in p_c_grid:
            for eps in eps_grid:
                seg = segment_id(p_c, eps, variant) or "-"
                # shipped mean margin vs quadrature
                for m in m_values:
                    if not 0.0 < p_c + m < 1.0:
                        continue
                    cf = _mean_margin(p_c, eps, m, variant)
                    orc = quadrature_mean_margin(p_c, eps, m, variant)
                    d = abs(cf - orc)
                    findings.append(Finding(variant.value, p_c, eps, seg,
                                            f"mean-margin@m={m:g}", cf, orc, d,
                                            _status(d, abs_tol, False)))
                # shipped adjustment vs root-found adjustment
                adj = _solve(p_c, eps, variant)
                d = abs(adj.residual)
                findings.append(Finding(variant.value, p_c, eps, seg,
                                        "adjustment-residual", adj.m, 0.0, d,
                                        _status(d, PLUGBACK_TOL * 10, False)))
                # printed forms vs oracle
                if seg != "-":
                    pm = printed_segment_value(p_c, eps, 0.0, variant)
                    orc = quadrature_mean_margin(p_c, eps, 0.0, variant)
                    d = abs(pm - orc)
                    findings.append(Finding(variant.value, p_c, eps, seg,
                                            "printed-mean-margin@m=0", pm, orc, d,
                                            _status(d, abs_tol, seg in bad_margin)))
                    pa = printed_adjustment_value(p_c, eps, variant)
                    d = abs(pa - adj.m)
                    findings.append(Finding(variant.value, p_c, eps, seg,
                                            "printed-adjustment", pa, adj.m, d,
                                            _status(d, 1e-8, seg in bad_adj)))
    return findings


def asymmetry_findings(points=((0.5, 0.25), (0.3, 0.1), (0.8, 0.4))) -> list[Finding]:
    """The printed asymmetry expression is positive on its whole domain,
    contradicting the prose claim that it never turns positive; the signed
    net (benefit plus cost) is the quantity matching the prose.  Recorded
    as a documented discrepancy, never a failure."""
    from .pricing import asymmetry_delta, net_asymmetry
    out = []
    for p_t, iota in points:
        delta = asymmetry_delta(p_t, iota)
        net = net_asymmetry(p_t, iota)
        out.append(Finding("pricing", p_t, iota, "-", "asymmetry-sign-claim",
                           delta, net, abs(delta - net), "documented-discrepancy"))
    return out


def w1star_sweep(p_t_grid, eps_grid, residual_tol: float = 1e-10) -> list[Finding]:
    out = []
    for p_t in p_t_grid:
        for eps in eps_grid:
            res = solve_w1_star(p_t, eps)
            if res.degenerate or res.w1 in (0.0, 1.0):
                resid = 0.0
            else:
                resid = abs(conditional_mean_seller_margin(p_t, eps, WeightRule(res.w1)))
            out.append(Finding("candidate-a", p_t, eps, "-", "w1star-residual",
                               res.w1, 0.0, resid, _status(resid, residual_tol, False)))
    return out
