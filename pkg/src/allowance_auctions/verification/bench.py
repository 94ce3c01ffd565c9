"""Approximation-ratio benches against the exact welfare optimum."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..model import AuctionInstance, optimal_welfare, social_welfare
from ..rng import instance_rng, trial_seed

COMBINED_RATIO = 49 + 8 * math.sqrt(3)


def large_market_bound(rho: float) -> float:
    """Expected fraction of OPT guaranteed by per-slot half pricing."""
    return (1 - 1 / rho) / 48 if rho > 1 else 0.0


def uniform_price_bound(beta: float, rho: float, k: int) -> float:
    """Expected fraction of OPT for uniform pricing at CTR share ``beta``.

    Maximizing over ``beta`` gives ``3/8 (1 - sqrt(1 - rho/3k))^2``.
    """
    r = rho / (3 * k)
    if beta >= 1:
        return 0.375 if r >= 1 else 0.0
    return max(0.0, 0.375 * beta / (1 - beta) * (r - beta))


def ratio_bound(mechanism: str, rho: float, k: int, epsilon: float | None = None,
                beta: float | None = None) -> float:
    if mechanism == "public":
        return 1 / (1 + epsilon)
    if mechanism == "single_slot":
        return 1 / (rho * (1 + epsilon))
    if mechanism == "large_market":
        return large_market_bound(rho)
    if mechanism == "combined":
        return 1 / (COMBINED_RATIO * (1 + epsilon))
    if mechanism == "uniform_price":
        return uniform_price_bound(beta, rho, k)
    return 0.0


@dataclass(frozen=True)
class RatioStats:
    mechanism: str
    trials: int
    skipped: int
    mean_ratio: float
    min_ratio: float
    ci_low: float
    ci_high: float
    mean_alg: float
    mean_opt: float
    bound: float

    @property
    def passed(self) -> bool:
        return self.mean_ratio >= self.bound

    def as_row(self) -> dict:
        return {
            "mechanism": self.mechanism,
            "trials": self.trials,
            "skipped": self.skipped,
            "mean_ratio": self.mean_ratio,
            "min_ratio": self.min_ratio,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "bound": self.bound,
            "pass": self.passed,
        }


def empirical_ratio(mechanism, source, trials: int, root_seed: int) -> RatioStats:
    """Run ``trials`` independent rounds and aggregate ALG / OPT.

    ``source`` is either a fixed :class:`AuctionInstance` or a callable taking
    a generator and returning one. Trial ``i`` uses ``trial_seed(root, i)``;
    instances are drawn from a separate stream so the mechanism's randomness
    never shifts the instance sequence. The reported bound is the smallest
    theorem bound over the instances seen, using each instance's observed rho.
    """
    ratios, algs, opts, bounds = [], [], [], []
    skipped = 0
    for t in range(trials):
        inst = source if isinstance(source, AuctionInstance) else \
            source(instance_rng(root_seed, t))
        report = optimal_welfare(inst)
        if report.optimal_welfare <= 0:
            skipped += 1
            continue
        out = mechanism.run(inst, trial_seed(root_seed, t))
        alg = social_welfare(inst, out)
        ratios.append(alg / report.optimal_welfare)
        algs.append(alg)
        opts.append(report.optimal_welfare)
        bounds.append(ratio_bound(mechanism.name, report.rho_observed, inst.k,
                                  mechanism.epsilon, mechanism.beta_for(inst.k)))
    r = np.asarray(ratios)
    if len(r) == 0:
        nan = float("nan")
        return RatioStats(mechanism.name, trials, skipped, nan, nan, nan, nan, nan, nan, nan)
    half = 1.96 * r.std(ddof=1) / math.sqrt(len(r)) if len(r) > 1 else 0.0
    return RatioStats(mechanism.name, trials, skipped, float(r.mean()), float(r.min()),
                      float(r.mean() - half), float(r.mean() + half),
                      float(np.mean(algs)), float(np.mean(opts)), float(min(bounds)))
