"""End-to-end simulation of the wagering game and the quote-elicitation variant.

The simulator is the universal empirical oracle: it draws noisy beliefs,
assigns roles, forms the consensus, applies strategies and optional fair
adjustments, and settles stakes.  Randomness is organised in fixed-size
chunks, each driven by its own counter-based stream derived from the
master seed, so the ledger is a pure function of the configuration and is
identical regardless of how chunks are scheduled.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace
from typing import Callable, Iterator

import numpy as np

from .errors import DomainError, EmptySelectionError
from .fairsolver import fair_adjustment_vector
from .posterior import Variant
from .pricing import EQUAL_WEIGHTS, WeightRule

CHUNK_SIZE = 1 << 20

ROLE_PLAYER1_BUYER = 1
ROLE_PLAYER1_SELLER = -1
ROLE_NO_TRADE = 0

ROLE_LABELS = {ROLE_PLAYER1_BUYER: "Buyer", ROLE_PLAYER1_SELLER: "Seller",
               ROLE_NO_TRADE: "NoTrade"}
OUTCOME_LABELS = {1: "Win", -1: "Lose", 0: "NoBet"}

LEDGER_DTYPE = np.dtype([
    ("trial_id", np.int64),
    ("p_t", np.float64),
    ("p_b", np.float64),
    ("p_s", np.float64),
    ("role_of_player1", np.int8),
    ("p_c", np.float64),
    ("m_applied", np.float64),
    ("odds", np.float64),
    ("action_buyer", np.bool_),
    ("action_seller", np.bool_),
    ("outcome", np.int8),
    ("payoff_buyer", np.float64),
    ("payoff_seller", np.float64),
])

CSV_COLUMNS = ("trial_id", "p_t", "p_b", "p_s", "role_of_player1", "p_c",
               "m_applied", "odds", "action_buyer", "action_seller",
               "outcome", "payoff_buyer", "payoff_seller")


@dataclass(frozen=True)
class StrategyMatrix:
    """Post-quote decision rule: bet or abandon as a function of the odds."""

    name: str
    buyer_bets: Callable[[np.ndarray], np.ndarray]
    seller_bets: Callable[[np.ndarray], np.ndarray]


def always_bet() -> StrategyMatrix:
    return StrategyMatrix("always-bet",
                          buyer_bets=lambda odds: np.ones_like(odds, dtype=bool),
                          seller_bets=lambda odds: np.ones_like(odds, dtype=bool))


def figure5_strategy() -> StrategyMatrix:
    """Bet only on the profitable side of the odds-2 boundary.

    The buyer bets at odds above two, the seller at odds below two; at
    exactly two the expectation is zero either way and both bet.
    """
    return StrategyMatrix("threshold-2",
                          buyer_bets=lambda odds: odds >= 2.0,
                          seller_bets=lambda odds: odds <= 2.0)


@dataclass(frozen=True)
class GameConfig:
    """Full specification of a simulation run.

    p_t is the fixed relative frequency, or None for a fresh uniform draw
    each trial.  Strategies are per player; the role rule decides which
    row of each player's matrix applies.  adjustment 'fair' shifts the
    consensus by the closed-form zero-expectation amount.
    """

    epsilon: float
    trials: int
    master_seed: int
    p_t: float | None = None
    weight_rule: WeightRule = EQUAL_WEIGHTS
    strategy_player1: StrategyMatrix = field(default_factory=always_bet)
    strategy_player2: StrategyMatrix = field(default_factory=always_bet)
    adjustment: str = "none"
    stake: float = 1.0
    chunk_size: int = CHUNK_SIZE

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise DomainError(f"epsilon must lie in [0, 1], got {self.epsilon}")
        if self.trials < 1:
            raise DomainError(f"trials must be >= 1, got {self.trials}")
        if self.p_t is not None and not 0.0 < self.p_t < 1.0:
            raise DomainError(f"fixed p_t must lie in (0, 1), got {self.p_t}")
        if self.adjustment not in ("none", "fair"):
            raise DomainError(f"adjustment must be 'none' or 'fair', got {self.adjustment!r}")
        if self.chunk_size < 1:
            raise DomainError("chunk_size must be >= 1")


def _chunk_rng(master_seed: int, chunk_index: int) -> np.random.Generator:
    seq = np.random.SeedSequence(entropy=master_seed, spawn_key=(chunk_index,))
    return np.random.Generator(np.random.Philox(seq))


def _iter_chunks(config: GameConfig,
                 variant: Variant = Variant.BASIC_GAME) -> Iterator[np.ndarray]:
    """Yield ledger chunks; each chunk depends only on (config, its index)."""
    done = 0
    index = 0
    while done < config.trials:
        n = min(config.chunk_size, config.trials - done)
        yield _run_chunk(config, index, done, n, variant)
        done += n
        index += 1


def _draw_beliefs(config: GameConfig, rng: np.random.Generator, n: int):
    if config.p_t is None:
        p_t = rng.random(n)
    else:
        p_t = np.full(n, config.p_t)
    e = config.epsilon * np.minimum(p_t, 1.0 - p_t)
    p1 = p_t + e * (2.0 * rng.random(n) - 1.0)
    p2 = p_t + e * (2.0 * rng.random(n) - 1.0)
    return p_t, p1, p2


def _run_chunk(config: GameConfig, chunk_index: int, offset: int, n: int,
               variant: Variant) -> np.ndarray:
    rng = _chunk_rng(config.master_seed, chunk_index)
    p_t, p1, p2 = _draw_beliefs(config, rng, n)
    u_outcome = rng.random(n)

    rec = np.zeros(n, dtype=LEDGER_DTYPE)
    rec["trial_id"] = offset + np.arange(n)
    rec["p_t"] = p_t
    role = np.where(p1 > p2, ROLE_PLAYER1_BUYER,
                    np.where(p1 < p2, ROLE_PLAYER1_SELLER, ROLE_NO_TRADE))
    rec["role_of_player1"] = role
    trade = role != ROLE_NO_TRADE
    p_b = np.maximum(p1, p2)
    p_s = np.minimum(p1, p2)
    rec["p_b"] = p_b
    rec["p_s"] = p_s

    w1 = config.weight_rule.w1
    p_c = p_b * (1.0 - w1) + p_s * w1
    rec["p_c"] = p_c
    m = np.zeros(n)
    if config.adjustment == "fair":
        m[trade] = fair_adjustment_vector(p_c[trade], config.epsilon, variant)
    rec["m_applied"] = m
    quote = p_c + m
    odds = np.full(n, np.nan)
    odds[trade] = 1.0 / quote[trade]
    rec["odds"] = odds

    strat_buyer_is_p1 = role == ROLE_PLAYER1_BUYER
    s1_buy = config.strategy_player1.buyer_bets(odds)
    s2_buy = config.strategy_player2.buyer_bets(odds)
    s1_sell = config.strategy_player1.seller_bets(odds)
    s2_sell = config.strategy_player2.seller_bets(odds)
    action_buyer = np.where(strat_buyer_is_p1, s1_buy, s2_buy) & trade
    action_seller = np.where(strat_buyer_is_p1, s2_sell, s1_sell) & trade
    rec["action_buyer"] = action_buyer
    rec["action_seller"] = action_seller

    settled = action_buyer & action_seller
    win = settled & (u_outcome < p_t)
    lose = settled & ~win
    rec["outcome"][win] = 1
    rec["outcome"][lose] = -1
    rec["payoff_buyer"][win] = config.stake * (odds[win] - 1.0)
    rec["payoff_buyer"][lose] = -config.stake
    rec["payoff_seller"] = -rec["payoff_buyer"]
    return rec


@dataclass(frozen=True)
class GameLedger:
    """Immutable trial-by-trial record of a simulation run."""

    records: np.ndarray

    def __len__(self) -> int:
        return len(self.records)

    def __getitem__(self, item):
        return self.records[item]

    def to_csv(self, path) -> None:
        """Write the ledger with a header row and 17-significant-digit floats."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for rec in self.records:
                row = []
                for name in CSV_COLUMNS:
                    v = rec[name]
                    if name == "trial_id":
                        row.append(int(v))
                    elif name == "role_of_player1":
                        row.append(ROLE_LABELS[int(v)])
                    elif name in ("action_buyer", "action_seller"):
                        row.append("Bet" if v else "Abandon")
                    elif name == "outcome":
                        row.append(OUTCOME_LABELS[int(v)])
                    else:
                        row.append(f"{float(v):.17g}")
                writer.writerow(row)


def simulate(config: GameConfig) -> GameLedger:
    """Run the two-player game; deterministic given the master seed."""
    return GameLedger(np.concatenate(list(_iter_chunks(config))))


@dataclass(frozen=True)
class MarginEstimate:
    mean: float
    std_error: float
    n: int
    filter_description: str


def _estimate(values: np.ndarray, description: str) -> MarginEstimate:
    n = len(values)
    if n < 2:
        raise EmptySelectionError(
            f"filter {description!r} selected {n} record(s); need at least 2"
        )
    return MarginEstimate(mean=float(values.mean()),
                          std_error=float(values.std(ddof=1) / np.sqrt(n)),
                          n=n, filter_description=description)


def estimate_margin(ledger: GameLedger, filter=None, normalize_per: str = "Bet",
                    description: str | None = None) -> MarginEstimate:
    """Mean and standard error of the seller payoff over selected records.

    filter is a callable mapping the record array to a boolean mask (None
    selects everything).  'Bet' normalisation averages over settled wagers
    only; 'Trial' counts unsettled trials as zero payoff.
    """
    if normalize_per not in ("Bet", "Trial"):
        raise DomainError(f"normalize_per must be 'Bet' or 'Trial', got {normalize_per!r}")
    rec = ledger.records
    mask = np.ones(len(rec), dtype=bool) if filter is None else np.asarray(filter(rec))
    desc = description or ("all" if filter is None else "custom filter")
    desc = f"{desc} (per {normalize_per.lower()})"
    if normalize_per == "Bet":
        mask = mask & (rec["outcome"] != 0)
    return _estimate(rec["payoff_seller"][mask], desc)


def player1_payoffs(ledger: GameLedger) -> np.ndarray:
    rec = ledger.records
    return np.where(rec["role_of_player1"] == ROLE_PLAYER1_BUYER,
                    rec["payoff_buyer"],
                    np.where(rec["role_of_player1"] == ROLE_PLAYER1_SELLER,
                             rec["payoff_seller"], 0.0))


# --------------------------------------------------------------------------
# Streaming estimators (no ledger retention; usable at 1e8 trials)
# --------------------------------------------------------------------------

class _Accumulator:
    """Streaming count/sum/sum-of-squares over one or more bins."""

    def __init__(self, bins: int = 1):
        self.n = np.zeros(bins, dtype=np.int64)
        self.total = np.zeros(bins)
        self.total_sq = np.zeros(bins)

    def add(self, values: np.ndarray, bin_index=None) -> None:
        if bin_index is None:
            self.n[0] += len(values)
            self.total[0] += values.sum()
            self.total_sq[0] += (values * values).sum()
        else:
            self.n += np.bincount(bin_index, minlength=len(self.n))
            self.total += np.bincount(bin_index, weights=values, minlength=len(self.n))
            self.total_sq += np.bincount(bin_index, weights=values * values,
                                         minlength=len(self.n))

    def estimate(self, index: int, description: str) -> MarginEstimate:
        n = int(self.n[index])
        if n < 2:
            raise EmptySelectionError(
                f"{description!r} accumulated {n} record(s); need at least 2"
            )
        mean = self.total[index] / n
        var = max(self.total_sq[index] / n - mean * mean, 0.0) * n / (n - 1)
        return MarginEstimate(mean=float(mean), std_error=float(np.sqrt(var / n)),
                              n=n, filter_description=description)


def conditional_margin_mc(p_t: float, epsilon: float, rule: WeightRule,
                          trials: int, master_seed: int,
                          chunk_size: int = CHUNK_SIZE) -> MarginEstimate:
    """Mean expected seller margin over trials with p_s < p_b, by streaming.

    Averages the per-trial expected margin (the outcome expectation is
    taken analytically), which estimates the same conditional mean as the
    settled payoffs with far smaller variance.
    """
    config = GameConfig(epsilon=epsilon, trials=trials, master_seed=master_seed,
                        p_t=p_t, weight_rule=rule, chunk_size=chunk_size)
    acc = _Accumulator()
    done = 0
    index = 0
    while done < trials:
        n = min(chunk_size, trials - done)
        rng = _chunk_rng(master_seed, index)
        pt, p1, p2 = _draw_beliefs(config, rng, n)
        sold = p1 != p2
        p_b = np.maximum(p1[sold], p2[sold])
        p_s = np.minimum(p1[sold], p2[sold])
        p_c = p_b * (1.0 - rule.w1) + p_s * rule.w1
        margin = (1.0 - pt[sold]) - pt[sold] * (1.0 / p_c - 1.0)
        acc.add(margin)
        done += n
        index += 1
    return acc.estimate(0, f"expected seller margin | p_s < p_b, p_t={p_t}")


def binned_seller_margin(config: GameConfig, centers, half_width: float = 0.005,
                         variant: Variant = Variant.BASIC_GAME) -> list[MarginEstimate]:
    """Expected seller margin per p_c bin, streaming over chunks.

    Bins are [center - half_width, center + half_width] on the unadjusted
    consensus; the margin uses the quote actually wagered at (including
    any fair adjustment).
    """
    centers = np.asarray(centers, dtype=float)
    acc = _Accumulator(len(centers))
    done = 0
    index = 0
    while done < config.trials:
        n = min(config.chunk_size, config.trials - done)
        rng = _chunk_rng(config.master_seed, index)
        p_t, p1, p2 = _draw_beliefs(config, rng, n)
        sold = p1 != p2
        p_t = p_t[sold]
        p_b = np.maximum(p1[sold], p2[sold])
        p_s = np.minimum(p1[sold], p2[sold])
        w1 = config.weight_rule.w1
        p_c = p_b * (1.0 - w1) + p_s * w1
        for i, c in enumerate(centers):
            hit = np.abs(p_c - c) <= half_width
            if not hit.any():
                continue
            quote = p_c[hit]
            if config.adjustment == "fair":
                quote = quote + fair_adjustment_vector(quote, config.epsilon, variant)
            margin = (1.0 - p_t[hit]) - p_t[hit] * (1.0 / quote - 1.0)
            acc.add(margin, np.full(hit.sum(), i))
        done += n
        index += 1
    return [acc.estimate(i, f"expected seller margin | p_c in "
                            f"[{c - half_width:g}, {c + half_width:g}]")
            for i, c in enumerate(centers)]


def posterior_histogram(p_c: float, epsilon: float, trials: int, master_seed: int,
                        n_bins: int = 50, half_width: float = 0.005,
                        chunk_size: int = CHUNK_SIZE):
    """Histogram of p_t over trials whose consensus lands within half_width
    of p_c (uniform prior, equal weights).  Returns (bin_edges, counts,
    n_selected); counts cover the theoretical support of p_t given p_c.
    """
    from .posterior import pt_support
    lo, hi = pt_support(p_c, epsilon)
    edges = np.linspace(lo, hi, n_bins + 1)
    counts = np.zeros(n_bins, dtype=np.int64)
    selected = 0
    config = GameConfig(epsilon=epsilon, trials=trials, master_seed=master_seed,
                        chunk_size=chunk_size)
    done = 0
    index = 0
    while done < trials:
        n = min(chunk_size, trials - done)
        rng = _chunk_rng(master_seed, index)
        p_t, p1, p2 = _draw_beliefs(config, rng, n)
        cons = 0.5 * (p1 + p2)
        hit = np.abs(cons - p_c) <= half_width
        pts = p_t[hit]
        selected += len(pts)
        counts += np.histogram(pts, bins=edges)[0]
        done += n
        index += 1
    return edges, counts, selected


def strategy_payoff_estimates(config: GameConfig) -> tuple[MarginEstimate, MarginEstimate]:
    """Streaming per-trial realized payoff of each player (zero-sum pair)."""
    acc1 = _Accumulator()
    acc2 = _Accumulator()
    for chunk in _iter_chunks(config):
        ledger = GameLedger(chunk)
        p1 = player1_payoffs(ledger)
        acc1.add(p1)
        acc2.add(-p1)
    return (acc1.estimate(0, "player 1 realized payoff per trial"),
            acc2.estimate(0, "player 2 realized payoff per trial"))


# --------------------------------------------------------------------------
# Quote-elicitation variant: the subject states the odds, the counterpart
# picks her side of the market.
# --------------------------------------------------------------------------

def _definetti_chunk(config: GameConfig, chunk_index: int, offset: int,
                     n: int) -> np.ndarray:
    rng = _chunk_rng(config.master_seed, chunk_index)
    p_t, p_subject, _ = _draw_beliefs(config, rng, n)
    u_outcome = rng.random(n)

    rec = np.zeros(n, dtype=LEDGER_DTYPE)
    rec["trial_id"] = offset + np.arange(n)
    rec["p_t"] = p_t
    p_c = p_subject
    rec["p_c"] = p_c
    m = np.zeros(n)
    if config.adjustment == "fair":
        m = fair_adjustment_vector(p_c, config.epsilon, Variant.DE_FINETTI)
    rec["m_applied"] = m
    quote = p_c + m
    odds = 1.0 / quote
    rec["odds"] = odds

    # The counterpart takes the buyer side at odds above two, otherwise the
    # seller side; the subject (player 1) is forced onto the remainder.
    counterpart_buys = odds > 2.0
    role = np.where(counterpart_buys, ROLE_PLAYER1_SELLER, ROLE_PLAYER1_BUYER)
    rec["role_of_player1"] = role
    rec["p_s"] = np.where(counterpart_buys, p_subject, np.nan)
    rec["p_b"] = np.where(counterpart_buys, np.nan, p_subject)
    rec["action_buyer"] = True
    rec["action_seller"] = True

    win = u_outcome < p_t
    rec["outcome"] = np.where(win, 1, -1)
    rec["payoff_buyer"] = np.where(win, config.stake * (odds - 1.0), -config.stake)
    rec["payoff_seller"] = -rec["payoff_buyer"]
    return rec


def simulate_definetti(config: GameConfig) -> GameLedger:
    """Run the quote-elicitation game; the subject is player 1."""
    chunks = []
    done = 0
    index = 0
    while done < config.trials:
        n = min(config.chunk_size, config.trials - done)
        chunks.append(_definetti_chunk(config, index, done, n))
        done += n
        index += 1
    return GameLedger(np.concatenate(chunks))


def definetti_subject_margin(config: GameConfig) -> MarginEstimate:
    """Streaming mean expected margin of the quoting subject per trial."""
    acc = _Accumulator()
    done = 0
    index = 0
    while done < config.trials:
        n = min(config.chunk_size, config.trials - done)
        rng = _chunk_rng(config.master_seed, index)
        p_t, p_subject, _ = _draw_beliefs(config, rng, n)
        quote = p_subject
        if config.adjustment == "fair":
            quote = quote + fair_adjustment_vector(quote, config.epsilon,
                                                   Variant.DE_FINETTI)
        seller_margin = (1.0 - p_t) - p_t * (1.0 / quote - 1.0)
        subject_is_seller = 1.0 / quote > 2.0
        margin = np.where(subject_is_seller, seller_margin, -seller_margin)
        acc.add(margin)
        done += n
        index += 1
    return acc.estimate(0, "expected margin of the quoting subject (per trial)")
