"""Command-line front end: solvers, simulator, figure data series, verification.

Every file-writing command drops a JSON sidecar manifest next to its
outputs recording the command, parameters, seed and artifact version, so
any artifact can be regenerated bit-for-bit.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .beliefs import belief_envelope, probability_to_woe, woe_cdf, woe_pdf
from .errors import (DegenerateDistributionError, DomainError, EmptySelectionError,
                     NoRegionError, NoRootError)
from .fairsolver import (FINDING_FIELDS, Finding, _solve, asymmetry_findings,
                         oracle_sweep, solve_definetti_adjustment,
                         solve_fair_adjustment, solve_w1_star, w1star_sweep,
                         weight_integrals)
from .montecarlo import (GameConfig, always_bet, binned_seller_margin,
                         conditional_margin_mc, definetti_subject_margin,
                         estimate_margin, figure5_strategy, player1_payoffs,
                         simulate, simulate_definetti)
from .posterior import PosteriorDensity, Variant
from .pricing import WeightRule, conditional_mean_seller_margin

EXIT_OK = 0
EXIT_FINDING = 1
EXIT_VALIDATION = 2
EXIT_NO_ROOT = 3

FIGURE_IDS = (1, 2, 3, 4, 6, 7, 8, 9)


def _default_seed() -> int:
    return int(os.environ.get("NOISYODDS_SEED", "0"))


def _variant(name: str) -> Variant:
    return Variant.BASIC_GAME if name == "basic" else Variant.DE_FINETTI


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([f"{v:.17g}" if isinstance(v, float) else v for v in row])


def _write_manifest(path: Path, command: str, parameters: dict, seed: int,
                    output_paths) -> None:
    manifest = {
        "command": command,
        "parameters": parameters,
        "seed": seed,
        "artifact_version": __version__,
        "output_paths": [str(p) for p in output_paths],
    }
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


# --------------------------------------------------------------------------
# Subcommands
# --------------------------------------------------------------------------

def cmd_fair_odds(args) -> int:
    adj = (solve_fair_adjustment if args.variant == "basic"
           else solve_definetti_adjustment)(args.pc, args.eps)
    print(f"p_c                = {adj.p_c:.17g}")
    print(f"epsilon            = {adj.epsilon:.17g}")
    print(f"m                  = {adj.m:.17g}")
    print(f"fair probability   = {adj.fair_probability:.17g}")
    print(f"fair odds          = {adj.fair_odds:.17g}")
    print(f"segment            = {adj.segment_id}")
    print(f"oracle residual    = {adj.residual:.3g}")
    print(f"method             = {adj.method}")
    return EXIT_OK


def cmd_w1star(args) -> int:
    res = solve_w1_star(args.pt, args.eps)
    print(f"w1*        = {res.w1:.17g}")
    print(f"degenerate = {res.degenerate}")
    if res.degenerate:
        print("note: with zero noise every weight is fair; 1/2 returned by convention")
    return EXIT_OK


def cmd_margin(args) -> int:
    rule = WeightRule(args.w1)
    value = conditional_mean_seller_margin(args.pt, args.eps, rule)
    print(f"mean expected seller margin = {value:.17g}")
    if args.mc_trials:
        est = conditional_margin_mc(args.pt, args.eps, rule, args.mc_trials, args.seed)
        gap = abs(est.mean - value) / est.std_error if est.std_error else 0.0
        print(f"monte carlo                 = {est.mean:.10g} "
              f"(se {est.std_error:.3g}, n {est.n}, {gap:.2f} se from closed form)")
    return EXIT_OK


def cmd_posterior(args) -> int:
    dens = PosteriorDensity(args.pc, args.eps, _variant(args.variant))
    print(f"support       = [{dens.support_lo:.17g}, {dens.support_hi:.17g}]")
    print(f"normalization = {dens.normalization:.17g}")
    if args.out:
        out = Path(args.out)
        grid = np.linspace(dens.support_lo, dens.support_hi, args.points)
        rows = [(float(t), dens.pdf(float(t)), dens.unnormalized(float(t)))
                for t in grid]
        _write_csv(out, ("p_t", "density", "unnormalized"), rows)
        _write_manifest(out.with_suffix(".manifest.json"), "posterior",
                        {"pc": args.pc, "eps": args.eps, "variant": args.variant,
                         "points": args.points}, args.seed, [out])
        print(f"wrote {out}")
    return EXIT_OK


_STRATEGIES = {"always": always_bet, "figure5": figure5_strategy}


def cmd_simulate(args) -> int:
    config = GameConfig(
        epsilon=args.eps, trials=args.trials, master_seed=args.seed,
        p_t=args.pt, weight_rule=WeightRule(args.w1),
        strategy_player1=_STRATEGIES[args.strategy](),
        strategy_player2=_STRATEGIES[args.strategy2](),
        adjustment=args.adjust,
    )
    ledger = simulate_definetti(config) if args.definetti else simulate(config)
    rec = ledger.records
    settled = int((rec["outcome"] != 0).sum())
    print(f"trials  = {len(ledger)}  settled = {settled}")
    try:
        overall = estimate_margin(ledger, normalize_per="Bet", description="all settled")
        print(f"seller margin (per bet)   = {overall.mean:+.6f} "
              f"(se {overall.std_error:.6f}, n {overall.n})")
        p1 = player1_payoffs(ledger)
        print(f"player 1 mean payoff      = {p1.mean():+.6f} "
              f"(se {p1.std(ddof=1) / np.sqrt(len(p1)):.6f}, per trial)")
    except EmptySelectionError:
        print("no settled wagers; margins undefined")
    if args.bins and not args.definetti:
        for est in binned_seller_margin(config, args.bins, args.bin_half_width):
            print(f"  {est.filter_description}: {est.mean:+.6f} "
                  f"(se {est.std_error:.6f}, n {est.n})")
    outputs = []
    if args.out:
        out = Path(args.out)
        ledger.to_csv(out)
        outputs.append(out)
        _write_manifest(out.with_suffix(".manifest.json"), "simulate",
                        {"pt": args.pt, "eps": args.eps, "w1": args.w1,
                         "trials": args.trials, "strategy": args.strategy,
                         "strategy2": args.strategy2, "adjust": args.adjust,
                         "definetti": args.definetti}, args.seed, outputs)
        print(f"wrote {out}")
    return EXIT_OK


# ---------------------------------------------------------------- figures

def _figure_series(figure_id: int, seed: int):
    """x/y series sufficient to re-plot each figure."""
    pt_grid = np.linspace(0.01, 0.99, 99)
    pc_grid = np.linspace(0.01, 0.99, 99)
    eps_set = (0.25, 0.5, 0.75, 1.0)
    if figure_id == 1:
        rows = [(float(pt), eps, env.l, env.h)
                for eps in (0.5, 1.0) for pt in np.linspace(0.0, 1.0, 201)
                for env in (belief_envelope(float(pt), eps),)]
        return ("p_t", "epsilon", "l", "h"), rows
    if figure_id == 2:
        rows = []
        for p_t in (0.05, 0.5, 0.95):
            for eps in (0.5, 1.0):
                env = belief_envelope(p_t, eps)
                w_lo = probability_to_woe(max(env.l, 1e-6))
                w_hi = probability_to_woe(min(env.h, 1.0 - 1e-6))
                for w in np.linspace(w_lo, w_hi, 101):
                    rows.append((p_t, eps, float(w), woe_cdf(float(w), env),
                                 woe_pdf(float(w), env)))
        return ("p_t", "epsilon", "woe", "cdf", "pdf"), rows
    if figure_id == 3:
        rows = [(w1, eps, float(pt),
                 conditional_mean_seller_margin(float(pt), eps, WeightRule(w1)))
                for w1 in (0.3, 0.5, 0.7) for eps in eps_set for pt in pt_grid]
        return ("w1", "epsilon", "p_t", "mean_seller_margin"), rows
    if figure_id == 4:
        rows = []
        for eps in eps_set:
            for pt in pt_grid:
                res = solve_w1_star(float(pt), eps)
                e = eps * min(pt, 1.0 - pt)
                mean_pc = float(pt) + e / 3.0 * (1.0 - 2.0 * res.w1)
                rows.append((eps, float(pt), res.w1, mean_pc, 1.0 / mean_pc))
        return ("epsilon", "p_t", "w1_star", "mean_p_c", "mean_odds"), rows
    if figure_id == 6:
        rows = []
        for p_c in (0.05, 0.5, 0.95):
            for eps in (0.5, 1.0):
                dens = PosteriorDensity(p_c, eps, Variant.BASIC_GAME)
                for t in np.linspace(dens.support_lo, dens.support_hi, 101):
                    rows.append((p_c, eps, float(t), dens.pdf(float(t)),
                                 dens.unnormalized(float(t))))
        return ("p_c", "epsilon", "p_t", "density", "unnormalized"), rows
    if figure_id in (7, 8, 9):
        variant = Variant.DE_FINETTI if figure_id == 9 else Variant.BASIC_GAME
        rows = []
        for eps in eps_set:
            for pc in pc_grid:
                adj = _solve(float(pc), eps, variant)
                i0, i1 = weight_integrals(float(pc), eps, variant)
                margin_m0 = i0 - i1 / float(pc)
                rows.append((eps, float(pc), margin_m0, adj.m, 1.0 / float(pc),
                             adj.fair_odds))
        return ("epsilon", "p_c", "mean_seller_margin_m0", "m",
                "consensus_odds", "fair_odds"), rows
    raise DomainError(f"unknown figure id {figure_id}")


def cmd_figures(args) -> int:
    if args.id not in FIGURE_IDS:
        raise DomainError(f"unknown figure id {args.id}; known ids: {FIGURE_IDS}")
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    header, rows = _figure_series(args.id, args.seed)
    out = out_dir / f"figure{args.id}.csv"
    _write_csv(out, header, rows)
    _write_manifest(out_dir / f"figure{args.id}.manifest.json", "figures",
                    {"id": args.id}, args.seed, [out])
    print(f"wrote {out} ({len(rows)} rows)")
    return EXIT_OK


# ---------------------------------------------------------------- verify

def run_verify(abs_tol: float = 1e-6, se_mult: float = 3.0, seed: int = 0,
               mc_trials: int = 1_000_000, out: str | None = None) -> tuple[int, list[Finding]]:
    """Closed-form/oracle sweeps plus Monte Carlo agreement checks.

    Returns (exit_code, findings); exit code 0 iff every finding is 'ok'
    or 'documented-discrepancy'.
    """
    pc_grid = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.75, 0.9)
    eps_grid = (0.2, 0.5, 0.8, 1.0)
    findings = list(oracle_sweep(pc_grid, eps_grid, abs_tol=abs_tol))
    findings += asymmetry_findings()
    findings += w1star_sweep((0.2, 0.5, 0.8), (0.1, 0.5, 1.0))

    def se_status(gap: float, se: float) -> str:
        return "ok" if gap <= se_mult * se else "fail"

    for p_t, eps, w1 in ((0.3, 0.5, 0.5), (0.7, 0.8, 0.4), (0.5 - 1e-9, 1.0, 0.5)):
        closed = conditional_mean_seller_margin(p_t, eps, WeightRule(w1))
        est = conditional_margin_mc(p_t, eps, WeightRule(w1), mc_trials, seed)
        gap = abs(est.mean - closed)
        findings.append(Finding("monte-carlo", p_t, eps, "-",
                                f"conditional-margin@w1={w1:g}", closed, est.mean,
                                gap, se_status(gap, est.std_error)))
    for eps in (0.5, 1.0):
        config = GameConfig(epsilon=eps, trials=mc_trials, master_seed=seed,
                            adjustment="fair")
        for center in (0.3, 0.7):
            est = binned_seller_margin(config, [center], 0.005)[0]
            gap = abs(est.mean)
            findings.append(Finding("monte-carlo", center, eps, "-",
                                    "fair-adjusted-binned-margin", 0.0, est.mean,
                                    gap, se_status(gap, est.std_error)))
        est = definetti_subject_margin(config)
        gap = abs(est.mean)
        findings.append(Finding("monte-carlo", float("nan"), eps, "-",
                                "definetti-fair-subject-margin", 0.0, est.mean,
                                gap, se_status(gap, est.std_error)))
    outputs = []
    if out:
        out_path = Path(out)
        _write_csv(out_path, FINDING_FIELDS,
                   [tuple(getattr(f, k) for k in FINDING_FIELDS) for f in findings])
        _write_manifest(out_path.with_suffix(".manifest.json"), "verify",
                        {"abs_tol": abs_tol, "se_mult": se_mult,
                         "mc_trials": mc_trials}, seed, [out_path])
        outputs.append(out_path)
    failed = [f for f in findings if f.status == "fail"]
    return (EXIT_FINDING if failed else EXIT_OK), findings


def cmd_verify(args) -> int:
    code, findings = run_verify(abs_tol=args.abs_tol, se_mult=args.se_mult,
                                seed=args.seed, mc_trials=args.mc_trials,
                                out=args.out)
    counts: dict[str, int] = {}
    for f in findings:
        counts[f.status] = counts.get(f.status, 0) + 1
    for status in ("ok", "documented-discrepancy", "fail"):
        if counts.get(status):
            print(f"{status}: {counts[status]}")
    for f in findings:
        if f.status != "ok":
            print(f"  [{f.status}] {f.variant} p_c={f.p_c:g} eps={f.epsilon:g} "
                  f"seg={f.segment_id} {f.quantity}: "
                  f"value={f.closed_form:.6g} oracle={f.oracle:.6g}")
    if args.out:
        print(f"findings written to {args.out}")
    print("PASS" if code == EXIT_OK else "FAIL")
    return code


# --------------------------------------------------------------------------
# Parser
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="noisyodds",
        description="Fair odds, margins and simulations for noisy probabilities.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_seed(p):
        p.add_argument("--seed", type=int, default=_default_seed(),
                       help="master seed (default: NOISYODDS_SEED or 0)")

    p = sub.add_parser("fair-odds", help="zero-expectation odds adjustment")
    p.add_argument("--pc", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--variant", choices=("basic", "definetti"), default="basic")
    p.set_defaults(func=cmd_fair_odds)

    p = sub.add_parser("w1star", help="fair weight on the seller's belief")
    p.add_argument("--pt", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.set_defaults(func=cmd_w1star)

    p = sub.add_parser("margin", help="conditional mean seller margin")
    p.add_argument("--pt", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--w1", type=float, default=0.5)
    p.add_argument("--mc-trials", type=int, default=0,
                   help="optional Monte Carlo cross-check sample size")
    add_seed(p)
    p.set_defaults(func=cmd_margin)

    p = sub.add_parser("posterior", help="density of p_t given a consensus")
    p.add_argument("--pc", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--variant", choices=("basic", "definetti"), default="basic")
    p.add_argument("--out", help="optional CSV path for a density grid")
    p.add_argument("--points", type=int, default=201)
    add_seed(p)
    p.set_defaults(func=cmd_posterior)

    p = sub.add_parser("simulate", help="run the wagering game")
    p.add_argument("--pt", type=float, default=None,
                   help="fixed relative frequency (default: uniform prior)")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--w1", type=float, default=0.5)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--strategy", choices=sorted(_STRATEGIES), default="always",
                   help="player 1 strategy")
    p.add_argument("--strategy2", choices=sorted(_STRATEGIES), default="always",
                   help="player 2 strategy")
    p.add_argument("--adjust", choices=("none", "fair"), default="none")
    p.add_argument("--definetti", action="store_true",
                   help="quote-elicitation variant (player 1 quotes the odds)")
    p.add_argument("--bins", type=float, nargs="*", default=None,
                   help="p_c bin centers for conditioned margins")
    p.add_argument("--bin-half-width", type=float, default=0.005)
    p.add_argument("--out", help="ledger CSV path")
    add_seed(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("figures", help="emit the data series behind a figure")
    p.add_argument("--id", type=int, required=True, help=f"one of {FIGURE_IDS}")
    p.add_argument("--out", default=".", help="output directory")
    add_seed(p)
    p.set_defaults(func=cmd_figures)

    p = sub.add_parser("verify", help="closed-form/oracle findings report")
    p.add_argument("--abs-tol", type=float, default=1e-6)
    p.add_argument("--se-mult", type=float, default=3.0)
    p.add_argument("--mc-trials", type=int, default=1_000_000)
    p.add_argument("--out", help="findings CSV path")
    add_seed(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NoRootError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_ROOT
    except (DomainError, DegenerateDistributionError, NoRegionError,
            EmptySelectionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
