"""Uniform-price random-sampling auction for large markets."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import AuctionInstance, Outcome, ValidationError
from .private_mech import draw_partition, kth_highest, posted_price_sale


def optimal_beta(rho: float, k: int) -> float:
    """Share of CTR mass priced off the pricing side that maximizes the bound."""
    if rho <= 0:
        raise ValidationError("rho must be > 0")
    if rho > 3 * k:
        raise ValidationError(f"rho={rho} exceeds 3k={3 * k}; pass beta explicitly")
    return 1.0 - math.sqrt(1.0 - rho / (3.0 * k))


def welfare_bound(rho: float, k: int) -> float:
    """Guaranteed fraction of OPT in expectation: 3/8 * beta*^2."""
    return 0.375 * optimal_beta(rho, k) ** 2


def threshold_index(ctrs, beta: float) -> int:
    """Smallest 1-based t with ``sum(ctrs[:t]) >= beta * sum(ctrs)``."""
    ctrs = np.asarray(ctrs, dtype=float)
    total = ctrs.sum()
    if total <= 0:
        raise ValidationError("all-zero ctrs")
    if not 0 < beta <= 1:
        raise ValidationError("beta must be in (0, 1]")
    prefix = np.cumsum(ctrs)
    # cumulative rounding must not push the full sum below beta * total
    t = int(np.searchsorted(prefix, beta * total - 1e-12 * total, side="left")) + 1
    return min(t, len(ctrs))


@dataclass(frozen=True)
class UniformPriceParams:
    beta: float
    rho: float | None = None

    def __post_init__(self):
        if not 0 < self.beta <= 1:
            raise ValidationError("beta must be in (0, 1]")

    @classmethod
    def from_rho(cls, rho: float, k: int) -> "UniformPriceParams":
        return cls(optimal_beta(rho, k), rho)


def market_price(bids, t: int) -> float:
    """t-th highest of ``bids`` (0 when fewer than t)."""
    return float(kth_highest(np.asarray(bids, dtype=float), t)[t - 1])


def run_uniform_price(instance: AuctionInstance, params: UniformPriceParams,
                      rng: np.random.Generator) -> Outcome:
    t = threshold_index(instance.ctrs, params.beta)
    part = draw_partition(instance.n, rng)
    z = market_price(instance.bids[part.pricing], t)
    return posted_price_sale(instance, part, np.full(instance.k, z), "uniform_price")


def side_prices(instance: AuctionInstance, outcome: Outcome, beta: float) -> tuple[float, float]:
    """Market prices ``(Z1, Z2)`` computed on each side of the realized split."""
    t = threshold_index(instance.ctrs, beta)
    part = outcome.partition
    return market_price(instance.bids[part.s1], t), market_price(instance.bids[part.s2], t)
