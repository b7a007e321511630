"""Fair odds for noisy probabilities.

Tools for a two-player wagering game where both participants hold noisy,
unbiased beliefs about a relative frequency: weight-of-evidence
transforms, consensus pricing, the distribution of the truth behind an
observed quote, zero-expectation odds adjustments, and a deterministic
Monte Carlo simulator that serves as the empirical oracle for all of it.
"""
from .beliefs import (BeliefEnvelope, belief_envelope, probability_to_woe,
                      rhombus_bounds, sample_belief, woe_cdf, woe_pdf,
                      woe_to_probability)
from .errors import (DegenerateDistributionError, DomainError,
                     EmptySelectionError, NoisyOddsError, NoRegionError,
                     NoRootError)
from .fairsolver import (Adjustment, W1Star, basicgame_mean_margin,
                         definetti_mean_margin, fair_adjustment_vector,
                         oracle_sweep, quadrature_mean_margin, segment_id,
                         solve_definetti_adjustment, solve_fair_adjustment,
                         solve_w1_star, weight_integrals)
from .montecarlo import (GameConfig, GameLedger, MarginEstimate, StrategyMatrix,
                         always_bet, binned_seller_margin, conditional_margin_mc,
                         definetti_subject_margin, estimate_margin,
                         figure5_strategy, player1_payoffs, posterior_histogram,
                         simulate, simulate_definetti)
from .posterior import (PosteriorDensity, Variant, consensus_density,
                        definetti_pt_density, pt_density_given_pc, pt_support)
from .pricing import (EQUAL_WEIGHTS, ConsensusQuote, WeightRule,
                      asymmetry_delta, buyer_subjective_margin,
                      conditional_mean_seller_margin, consensus, net_asymmetry,
                      seller_objective_margin, seller_subjective_margin)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
