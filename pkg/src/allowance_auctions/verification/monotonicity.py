"""Necessary conditions for truthfulness under public allowances.

Both checks sweep one bidder's bid with everyone else fixed and read off the
CTR ``x(b)`` and payment ``p(b)`` she would receive.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..model import AuctionInstance


@dataclass(frozen=True)
class MonotonicityVerdict:
    passed: bool
    witness: tuple | None = None  # (low bid, high bid) of the first violation
    pairs_checked: int = 0


def default_sweep(instance: AuctionInstance, bidder: int, points: int = 200) -> np.ndarray:
    """Geometric sweep from a tenth of the smallest to thrice the largest bid."""
    pos = np.concatenate([instance.bids[instance.bids > 0], [instance.values[bidder]]])
    return np.geomspace(pos.min() / 10, pos.max() * 3, points)


def _sweep(mechanism, instance, bidder, sweep, seed):
    xs, ps = [], []
    for b in sweep:
        x, p = mechanism.bidder_outcome(instance.with_bid(bidder, float(b)), seed, bidder)
        xs.append(x)
        ps.append(p)
    return np.asarray(xs), np.asarray(ps)


def check_allocation_monotonicity(mechanism, instance: AuctionInstance, bidder: int,
                                  sweep=None, seed=None) -> MonotonicityVerdict:
    sweep = np.sort(default_sweep(instance, bidder) if sweep is None else np.asarray(sweep))
    xs, _ = _sweep(mechanism, instance, bidder, sweep, seed)
    drops = np.flatnonzero(np.diff(xs) < 0)
    if len(drops):
        d = drops[0]
        return MonotonicityVerdict(False, (float(sweep[d]), float(sweep[d + 1])), len(sweep) - 1)
    return MonotonicityVerdict(True, None, len(sweep) - 1)


def check_unit_price_monotonicity(mechanism, instance: AuctionInstance, bidder: int,
                                  sweep=None, seed=None) -> MonotonicityVerdict:
    """Every raise from ``v`` to ``v'`` that crosses the allowance line must
    charge a unit price strictly above ``v``.

    A pair ``v < v'`` is constrained when
    ``x(v') > allowance / v > x(v) > 0``; it passes when ``p(v') / x(v') > v``.
    """
    sweep = np.sort(default_sweep(instance, bidder) if sweep is None else np.asarray(sweep))
    xs, ps = _sweep(mechanism, instance, bidder, sweep, seed)
    gamma = float(instance.allowances[bidder])
    v = sweep[:, None]
    lo_x = xs[:, None]
    hi_x = xs[None, :]
    later = np.triu(np.ones((len(sweep), len(sweep)), dtype=bool), 1)
    line = gamma / v
    constrained = later & (hi_x > line) & (line > lo_x) & (lo_x > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        unit = np.where(hi_x > 0, ps[None, :] / hi_x, 0.0)
    bad = constrained & ~(unit > v)
    if bad.any():
        r, c = np.argwhere(bad)[0]
        return MonotonicityVerdict(False, (float(sweep[r]), float(sweep[c])), int(constrained.sum()))
    return MonotonicityVerdict(True, None, int(constrained.sum()))
