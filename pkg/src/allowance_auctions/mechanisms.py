"""Uniform handle over all mechanisms: ``mech.run(instance, seed)``.

Randomized mechanisms draw from ``make_rng(seed)``; replaying a seed replays
the partition, designation and branch choice exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .model import DUMMY, AuctionInstance, Outcome, ValidationError
from .private_mech import CombinedParams, run_combined, run_large_market, run_single_slot_instance
from .public_mech import PublicParams, public_bidder_outcome, run_public_auction
from .rng import make_rng
from .uniform_price import UniformPriceParams, optimal_beta, run_uniform_price
from .verification.baselines import run_plain_second_price, run_vcg_positions

MECHANISMS = ("public", "single_slot", "large_market", "combined",
              "uniform_price", "second_price_baseline")
NEEDS_EPSILON = {"public", "single_slot", "combined"}


@dataclass(frozen=True)
class Mechanism:
    name: str
    randomized: bool
    run_fn: Callable = field(repr=False)
    epsilon: float | None = None
    bidder_fn: Callable | None = field(default=None, repr=False)
    beta: float | None = None
    rho: float | None = None

    def beta_for(self, k: int) -> float | None:
        """CTR share used by the uniform-price mechanism on a k-slot instance."""
        if self.beta is not None:
            return self.beta
        return optimal_beta(self.rho, k) if self.rho is not None else None

    def run(self, instance: AuctionInstance, seed: int | None = None) -> Outcome:
        if self.randomized:
            if seed is None:
                raise ValidationError(f"{self.name} needs a seed")
            return self.run_fn(instance, make_rng(seed))
        return self.run_fn(instance, None)

    def bidder_outcome(self, instance: AuctionInstance, seed, bidder: int):
        """``(ctr, payment)`` obtained by ``bidder``."""
        if self.bidder_fn is not None:
            slot, pay = self.bidder_fn(instance, bidder)
        else:
            out = self.run(instance, seed)
            slot, pay = int(out.assignment[bidder]), float(out.payments[bidder])
        ctr = 0.0 if slot == DUMMY else float(instance.ctrs[slot])
        return ctr, pay


def get_mechanism(name: str, epsilon: float | None = None, beta: float | None = None,
                  rho: float | None = None, payment_rule: str = "corrected") -> Mechanism:
    if name not in MECHANISMS and name != "vcg_mock":
        raise ValidationError(f"unknown mechanism {name!r}")
    if name in NEEDS_EPSILON and epsilon is None:
        raise ValidationError(f"mechanism {name} requires --epsilon")
    if name == "public":
        params = PublicParams(epsilon, payment_rule)
        return Mechanism(name, False, lambda inst, rng: run_public_auction(inst, params),
                         epsilon, lambda inst, i: public_bidder_outcome(inst, params, i))
    if name == "single_slot":
        params = CombinedParams(epsilon, rule=payment_rule)
        return Mechanism(name, False,
                         lambda inst, rng: run_single_slot_instance(inst, epsilon, params.rule), epsilon)
    if name == "large_market":
        return Mechanism(name, True, run_large_market)
    if name == "combined":
        params = CombinedParams(epsilon, rule=payment_rule)
        return Mechanism(name, True, lambda inst, rng: run_combined(inst, params, rng), epsilon)
    if name == "uniform_price":
        if beta is None and rho is None:
            raise ValidationError("uniform_price requires --beta or --rho")

        def run(inst, rng):
            params = UniformPriceParams(beta, rho) if beta is not None else \
                UniformPriceParams.from_rho(rho, inst.k)
            return run_uniform_price(inst, params, rng)
        return Mechanism(name, True, run, beta=beta, rho=rho)
    if name == "vcg_mock":
        return Mechanism(name, False, lambda inst, rng: run_vcg_positions(inst))
    return Mechanism(name, False,
                     lambda inst, rng: run_plain_second_price(inst.bids, float(inst.ctrs[0])))
