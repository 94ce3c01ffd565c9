"""Allowance-independent mechanisms for privately known allowances.

None of these read the allowance profile. Allowances only enter through the
buyers' own slot choice in the posted-price stage, which is simulated with
each buyer's true type.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .model import DUMMY, AuctionInstance, Bidder, Outcome, ValidationError, round_bid

P_SINGLE = math.sqrt(3) / (12 + math.sqrt(3))
P_LARGE = 12 / (12 + math.sqrt(3))


@dataclass(frozen=True)
class PartitionState:
    """Fair-coin split of the bidders plus the pricing/target designation."""

    s1: np.ndarray
    s2: np.ndarray
    pricing_side: int  # 1 or 2; the other side is the target side

    @property
    def pricing(self) -> np.ndarray:
        return self.s1 if self.pricing_side == 1 else self.s2

    @property
    def target(self) -> np.ndarray:
        return self.s2 if self.pricing_side == 1 else self.s1

    @property
    def target_side(self) -> int:
        return 3 - self.pricing_side


@dataclass(frozen=True)
class PricedSlot:
    slot: int
    unit_price: float
    ctr: float
    available: bool = True


@dataclass(frozen=True)
class CombinedParams:
    epsilon: float
    p_single: float = P_SINGLE
    rule: str = "corrected"

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValidationError("epsilon must be > 0")
        if self.rule not in ("corrected", "literal"):
            raise ValidationError(f"unknown payment rule {self.rule!r}")

    @property
    def p_large(self) -> float:
        return 1.0 - self.p_single


def draw_partition(n: int, rng: np.random.Generator) -> PartitionState:
    coins = rng.integers(0, 2, size=n)
    side = int(rng.integers(0, 2)) + 1
    idx = np.arange(n)
    return PartitionState(idx[coins == 0], idx[coins == 1], side)


def kth_highest(bids: np.ndarray, count: int) -> np.ndarray:
    """Top ``count`` of ``bids`` descending, zero-padded to length ``count``."""
    out = np.zeros(count)
    m = min(count, len(bids))
    if m:
        top = np.sort(bids)[::-1][:m]
        out[:m] = top
    return out


def select_best_slot(bidder: Bidder, offers) -> int:
    """Slot a buyer picks from ``offers`` (PricedSlot list), or ``DUMMY``."""
    offers = [o for o in offers if o.available]
    if not offers:
        return DUMMY
    prices = [o.unit_price for o in offers]
    ctrs = [o.ctr for o in offers]
    pick = _kernels._fallback.best_slot(bidder.value, bidder.allowance, prices, ctrs,
                                        [True] * len(offers))
    return DUMMY if pick < 0 else offers[pick].slot


def run_single_slot(bids, epsilon: float, alpha1: float = 1.0, rule: str = "corrected") -> Outcome:
    """Sell one slot of CTR ``alpha1`` on bids rounded to powers of 1+eps.

    The highest rounded bid wins, ties to the lowest index. A tied winner
    pays her rounded bid. A unique winner pays her threshold: the runner-up
    rounded bid ``m`` when she would win a tie at ``m`` (lower index than
    every bidder there), else ``(1+eps) * m``. ``rule="literal"`` always
    charges ``(1+eps) * m`` to a unique winner, which lets a low-index
    winner save by shading her bid into a tie.
    """
    if rule not in ("corrected", "literal"):
        raise ValidationError(f"unknown payment rule {rule!r}")
    bids = np.asarray(bids, dtype=float)
    n = len(bids)
    if n == 0:
        raise ValidationError("no bidders")
    if not epsilon > 0:
        raise ValidationError("epsilon must be > 0")
    rounded = np.array([round_bid(b, epsilon).rounded for b in bids])
    out = Outcome.empty(n)
    top = rounded.max()
    if top <= 0:
        return out
    tied = np.flatnonzero(rounded == top)
    winner = int(tied[0])
    if len(tied) > 1:
        price = top
    else:
        rest = np.delete(rounded, winner)
        m = rest.max() if len(rest) else 0.0
        runner_up = np.flatnonzero(rounded == m)
        if rule == "corrected" and m > 0 and winner < runner_up[0]:
            price = m
        else:
            price = (1.0 + epsilon) * m
    out.assignment[winner] = 0
    out.payments[winner] = price * alpha1
    out.branch = "single_slot"
    return out


def run_single_slot_instance(instance: AuctionInstance, epsilon: float,
                             rule: str = "corrected") -> Outcome:
    return run_single_slot(instance.bids, epsilon, float(instance.ctrs[0]), rule)


def large_market_prices(instance: AuctionInstance, part: PartitionState) -> np.ndarray:
    """Per-slot unit prices: half the j-th highest pricing-side bid."""
    return 0.5 * kth_highest(instance.bids[part.pricing], instance.k)


def posted_price_sale(instance: AuctionInstance, part: PartitionState,
                      unit_prices: np.ndarray, branch: str) -> Outcome:
    # target side arrives in ascending index order
    assignment, payments = _kernels.sequential_purchase(
        part.target, instance.values, instance.allowances, unit_prices, instance.ctrs)
    return Outcome(assignment, payments, branch=branch, partition=part,
                   prices=np.asarray(unit_prices, dtype=float))


def run_large_market(instance: AuctionInstance, rng: np.random.Generator) -> Outcome:
    part = draw_partition(instance.n, rng)
    return posted_price_sale(instance, part, large_market_prices(instance, part), "large_market")


def combined_branch(rng: np.random.Generator, p_single: float = P_SINGLE) -> str:
    return "single_slot" if rng.random() < p_single else "large_market"


def run_combined(instance: AuctionInstance, params: CombinedParams,
                 rng: np.random.Generator) -> Outcome:
    if combined_branch(rng, params.p_single) == "single_slot":
        return run_single_slot_instance(instance, params.epsilon, params.rule)
    return run_large_market(instance, rng)


def rank_matched_charge(instance: AuctionInstance, outcome: Outcome) -> float:
    """Price mass of slots whose rank-matched target bidder can afford them.

    Slot j is matched to the j-th highest target-side bidder; it counts
    ``z_j * ctr_j`` (``z_j`` = j-th highest pricing bid) whenever that bidder's
    bid is at least ``z_j``. Four times the achieved welfare must cover it.
    """
    part = outcome.partition
    z = kth_highest(instance.bids[part.pricing], instance.k)
    target = part.target
    order = target[np.lexsort((target, -instance.bids[target]))]
    total = 0.0
    m = min(instance.k, len(order), len(part.pricing))
    for j in range(m):
        if instance.bids[order[j]] >= z[j]:
            total += z[j] * instance.ctrs[j]
    return float(total)
