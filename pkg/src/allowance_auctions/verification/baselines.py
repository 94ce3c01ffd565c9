"""Reference mechanisms used as controls by the certification harness."""
from __future__ import annotations

import numpy as np

from ..model import AuctionInstance, Outcome, optimal_order


def run_plain_second_price(bids, alpha1: float = 1.0) -> Outcome:
    """Highest raw bid wins slot 0 (ties to lower index), pays the runner-up bid."""
    bids = np.asarray(bids, dtype=float)
    out = Outcome.empty(len(bids))
    if len(bids) == 0 or bids.max() <= 0:
        return out
    winner = int(np.argmax(bids))  # first maximal index
    rest = np.delete(bids, winner)
    out.assignment[winner] = 0
    out.payments[winner] = (rest.max() if len(rest) else 0.0) * alpha1
    return out


def run_vcg_positions(instance: AuctionInstance) -> Outcome:
    """Unrounded position auction charging the VCG externality, allowance-blind."""
    bids, ctrs = instance.bids, instance.ctrs
    order = optimal_order(bids)
    out = Outcome.empty(instance.n)
    k = instance.k
    for j in range(min(k, instance.n)):
        i = order[j]
        if bids[i] <= 0:
            break
        pay = 0.0
        for s in range(j, k):
            below = bids[order[s + 1]] if s + 1 < instance.n else 0.0
            next_ctr = ctrs[s + 1] if s + 1 < k else 0.0
            pay += below * (ctrs[s] - next_ctr)
        out.assignment[i] = j
        out.payments[i] = pay
    return out


def run_first_price_positions(instance: AuctionInstance) -> Outcome:
    """Top-k by raw bid, each winner pays own bid times CTR."""
    order = optimal_order(instance.bids)
    out = Outcome.empty(instance.n)
    for j in range(instance.k):
        i = order[j]
        out.assignment[i] = j
        out.payments[i] = instance.bids[i] * instance.ctrs[j]
    return out


def run_demoting_mock(instance: AuctionInstance, cap: float) -> Outcome:
    """Non-monotone control: bids above ``cap`` are pushed behind everyone."""
    bids = np.where(instance.bids > cap, -instance.bids, instance.bids)
    order = optimal_order(bids)
    out = Outcome.empty(instance.n)
    for j in range(instance.k):
        out.assignment[order[j]] = j
    return out


def run_constant_mock(instance: AuctionInstance) -> Outcome:
    """Ignores bids entirely: bidder j gets slot j."""
    out = Outcome.empty(instance.n)
    out.assignment[: instance.k] = np.arange(instance.k)
    return out
