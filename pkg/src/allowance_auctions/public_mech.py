"""Deterministic auction for bidders whose allowances are public.

Bids are rounded down to powers of ``1 + epsilon`` and the top-k rounded bids
win, ties going to the lower bidder index. A winner pays first-price on her
rounded bid while that stays within her allowance; past that threshold the
payment switches to a threshold (VCG-like) sum over the jumps of her
allocation curve.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

import numpy as np

from .model import (
    DUMMY,
    INF,
    TOL,
    AuctionInstance,
    Outcome,
    ValidationError,
    round_bid,
    validate_instance,
)


@dataclass(frozen=True)
class PublicParams:
    epsilon: float
    rule: str = "corrected"

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValidationError("epsilon must be > 0")
        if self.rule not in ("corrected", "literal"):
            raise ValidationError(f"unknown payment rule {self.rule!r}")

    @property
    def base(self) -> float:
        return 1.0 + self.epsilon


@dataclass(frozen=True)
class AllocationCurve:
    """Step function ``z -> CTR`` for one bidder, others' bids held fixed.

    ``starts[s]`` is the first integer exponent of segment ``s``; the first
    segment extends to ``-inf`` and the last to ``+inf``. ``ctrs[s]`` is
    non-decreasing in ``s`` and adjacent segments differ.
    """

    owner: int
    starts: tuple  # starts[0] is -inf
    ctrs: tuple

    def __call__(self, z) -> float:
        return self.ctrs[bisect.bisect_right(self.starts, z) - 1]

    @property
    def segments(self):
        """``(lo, hi, ctr)`` triples with inclusive integer bounds."""
        out = []
        for s, lo in enumerate(self.starts):
            hi = self.starts[s + 1] - 1 if s + 1 < len(self.starts) else INF
            out.append((lo, hi, self.ctrs[s]))
        return out


def rounded_exponents(bids, epsilon: float) -> list:
    return [round_bid(float(b), epsilon).exponent for b in bids]


def _rank_key(exponents, i):
    return (-exponents[i], i)


def public_allocation(exponents, k: int) -> list[int]:
    """Bidders holding slots 0..k-1, in slot order. Zero bids never win."""
    eligible = [i for i, t in enumerate(exponents) if t != -INF]
    eligible.sort(key=lambda i: _rank_key(exponents, i))
    return eligible[:k]


def _curve_from_exponents(exponents, bidder: int, ctrs) -> AllocationCurve:
    k = len(ctrs)
    others = [(t, j) for j, t in enumerate(exponents) if j != bidder and t != -INF]

    def ctr_at(z):
        rank = sum(1 for t, j in others if t > z or (t == z and j < bidder))
        return float(ctrs[rank]) if rank < k else 0.0

    # raising z past an equal exponent of a higher index flips the tie at z,
    # past a lower index only at z + 1
    breaks = sorted({int(t) if j > bidder else int(t) + 1 for t, j in others})
    starts, values = [-INF], []
    values.append(ctr_at(breaks[0] - 1) if breaks else ctr_at(0))
    for b in breaks:
        c = ctr_at(b)
        if c != values[-1]:
            starts.append(b)
            values.append(c)
    return AllocationCurve(bidder, tuple(starts), tuple(values))


def allocation_curve(instance: AuctionInstance, bidder: int, params: PublicParams) -> AllocationCurve:
    exps = rounded_exponents(instance.bids, params.epsilon)
    return _curve_from_exponents(exps, bidder, instance.ctrs)


def _floor_log_ratio(gamma: float, c: float, base: float) -> int:
    """Largest integer z with ``base**z * c <= gamma`` (relative tolerance)."""
    z = math.floor(math.log(gamma / c) / math.log(base))
    while base ** (z + 1) * c <= gamma * (1 + TOL):
        z += 1
    while base ** z * c > gamma * (1 + TOL):
        z -= 1
    return z


def threshold_exponent(curve: AllocationCurve, allowance: float, params: PublicParams):
    """Largest z with ``(1+eps)^z * f(z) <= allowance``.

    Returns ``+inf`` when the constraint never binds and ``-inf`` when no
    exponent is admissible (allowance 0 and a strictly positive curve).
    """
    best = -INF
    for lo, hi, c in curve.segments:
        if c <= 0 or allowance == INF:
            cand = hi
        elif allowance <= 0:
            continue
        else:
            z = _floor_log_ratio(allowance, c, params.base)
            if z < lo:
                continue
            cand = min(z, hi)
        best = max(best, cand)
    return best


def public_payment(curve: AllocationCurve, t: int, z_m, params: PublicParams,
                   allowance: float | None = None, rule: str = "corrected") -> float:
    """Payment of a winner with rounded exponent ``t``.

    Up to ``z_m`` she pays first price. Above it she pays a base amount plus
    ``(1+eps)^z * (f(z) - f(z-1))`` for every jump of the curve in
    ``(z_m, t]``. ``rule="literal"`` uses ``(1+eps)^z_m * f(z_m)`` as the
    base throughout. That leaves a bidder sitting at ``z_m`` with unused
    allowance free to buy the next CTR jump below its value, so the default
    ``"corrected"`` rule raises the base to
    ``min(allowance, (1+eps)^(z_m+1) * f(z_m))`` once a jump has been crossed.
    The two agree when ``f(z_m) = 0``, when the allowance is exactly used up
    at ``z_m``, and whenever ``f(t) = f(z_m)``. Without an ``allowance`` the
    literal base is used.
    """
    base = params.base
    if t <= z_m:
        return base ** t * curve(t)
    f_zm = curve(z_m)
    literal_base = base ** z_m * f_zm if z_m != -INF else 0.0
    jumps = 0.0
    # only segment starts in (z_m, t] carry a jump
    for s in range(1, len(curve.starts)):
        z = curve.starts[s]
        if z_m < z <= t:
            jumps += base ** z * (curve.ctrs[s] - curve.ctrs[s - 1])
    if rule == "literal" or allowance is None or curve(t) == f_zm:
        return literal_base + jumps
    if z_m == -INF:
        return min(allowance, 0.0) + jumps
    return min(allowance, base ** (z_m + 1) * f_zm) + jumps


def public_payment_naive(curve: AllocationCurve, t: int, z_m: int, params: PublicParams) -> float:
    """Term-by-term literal payment for finite ``z_m`` (cross-check only)."""
    base = params.base
    if t <= z_m:
        return base ** t * curve(t)
    pay = base ** z_m * curve(z_m)
    for z in range(z_m + 1, t + 1):
        pay += base ** z * (curve(z) - curve(z - 1))
    return pay


def _winner_payment(exps, i, instance, params):
    curve = _curve_from_exponents(exps, i, instance.ctrs)
    gamma = float(instance.allowances[i])
    z_m = threshold_exponent(curve, gamma, params)
    return public_payment(curve, exps[i], z_m, params, gamma, params.rule)


def run_public_auction(instance: AuctionInstance, params: PublicParams) -> Outcome:
    problems = validate_instance(instance)
    if problems:
        raise ValidationError(problems)
    exps = rounded_exponents(instance.bids, params.epsilon)
    out = Outcome.empty(instance.n)
    for j, i in enumerate(public_allocation(exps, instance.k)):
        out.assignment[i] = j
        out.payments[i] = _winner_payment(exps, i, instance, params)
    return out


def public_bidder_outcome(instance: AuctionInstance, params: PublicParams, bidder: int):
    """``(slot, payment)`` of one bidder without pricing the other winners."""
    exps = rounded_exponents(instance.bids, params.epsilon)
    winners = public_allocation(exps, instance.k)
    if bidder not in winners:
        return DUMMY, 0.0
    return winners.index(bidder), _winner_payment(exps, bidder, instance, params)
