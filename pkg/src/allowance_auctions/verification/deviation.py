"""Misreport search: is truthful bidding utility-maximizing for one bidder?

The utility of the rounding mechanisms is piecewise constant between powers
of ``1 + epsilon``, so a grid holding every power in the active range (and its
neighbours just above and below) covers every distinct behaviour. For the
random-sampling mechanisms the seed is replayed for every candidate bid,
which fixes the split, the designation and the branch.

Only the bid is varied. The allowance-independent mechanisms never read the
reported allowance, so a joint (bid, allowance) misreport produces the same
outcome as the bid misreport alone.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..model import INF, TOL, AuctionInstance, allowance_utility, round_bid


class DeviationError(RuntimeError):
    def __init__(self, bid: float, cause: Exception):
        self.bid = bid
        super().__init__(f"mechanism failed on candidate bid {bid!r}: {cause}")


@dataclass(frozen=True)
class DeviationGrid:
    bids: np.ndarray


def deviation_grid(instance: AuctionInstance, bidder: int, epsilon: float | None = None,
                   fill: int = 16, delta: float = 1e-6) -> DeviationGrid:
    """Candidate misreports for ``bidder``.

    Reported bids, the true value, a uniform fill up to twice the largest
    bid, and with ``epsilon`` every power ``(1+eps)^z`` covering the bids
    (two exponents of slack either side), each also perturbed by ``+-delta``
    relative.
    """
    value = float(instance.values[bidder])
    pos = [float(b) for b in instance.bids if b > 0] + [value]
    top = max(pos)
    cands = set(pos)
    cands.update(np.linspace(0, 2 * top, fill + 1)[1:].tolist())
    if epsilon is not None:
        base = 1.0 + epsilon
        exps = [round_bid(b, epsilon).exponent for b in pos]
        for z in range(int(min(exps)) - 2, int(max(exps)) + 3):
            p = base ** z
            cands.update((p, p * (1 - delta), p * (1 + delta)))
    grid = np.array(sorted(c for c in cands if c > 0))
    return DeviationGrid(grid)


@dataclass(frozen=True)
class DeviationReport:
    bidder: int
    truthful_utility: float
    best_bid: float
    best_utility: float
    gain: float
    certified: bool

    def as_row(self) -> dict:
        return {
            "bidder": self.bidder,
            "truthful_utility": self.truthful_utility,
            "best_bid": self.best_bid,
            "best_utility": self.best_utility,
            "gain": self.gain,
            "certified": self.certified,
        }


def _utility(mechanism, instance, bidder, bid, seed):
    try:
        ctr, pay = mechanism.bidder_outcome(instance.with_bid(bidder, bid), seed, bidder)
    except Exception as exc:  # noqa: BLE001 - re-raised with the bid attached
        raise DeviationError(bid, exc) from exc
    return allowance_utility(float(instance.values[bidder]),
                             float(instance.allowances[bidder]), ctr, pay)


def deviation_search(mechanism, instance: AuctionInstance, bidder: int,
                     grid: DeviationGrid | None = None, seed: int | None = None,
                     tol: float = TOL) -> DeviationReport:
    if grid is None:
        grid = deviation_grid(instance, bidder, mechanism.epsilon)
    value = float(instance.values[bidder])
    truthful = _utility(mechanism, instance, bidder, value, seed)
    best_bid, best = value, truthful
    for b in grid.bids:
        u = _utility(mechanism, instance, bidder, float(b), seed)
        if u > best:
            best_bid, best = float(b), u
    if truthful == -INF:
        gain = 0.0 if best == -INF else INF
    else:
        gain = best - truthful
    certified = gain <= tol and truthful >= -tol
    return DeviationReport(bidder, truthful, best_bid, best, gain, certified)


def certify_instance(mechanism, instance: AuctionInstance, seed: int | None = None,
                     grid_fill: int = 16) -> list[DeviationReport]:
    return [
        deviation_search(mechanism, instance, i,
                         deviation_grid(instance, i, mechanism.epsilon, fill=grid_fill), seed)
        for i in range(instance.n)
    ]


def mean_gain_over_seeds(mechanism, instance: AuctionInstance, bidder: int, bid: float,
                         seeds) -> float:
    """Expected utility change from reporting ``bid`` instead of the value."""
    value = float(instance.values[bidder])
    diffs = []
    for s in seeds:
        u_dev = _utility(mechanism, instance, bidder, bid, s)
        u_true = _utility(mechanism, instance, bidder, value, s)
        if u_dev == -INF:
            diffs.append(-INF if u_true > -INF else 0.0)
        else:
            diffs.append(u_dev - u_true)
    return float(np.mean(diffs)) if diffs else 0.0
