"""Core domain types for allowance-utility position auctions.

Bidders hold a per-click value and an allowance: payments up to the
allowance are "free" (value-maximizer behaviour), anything beyond it is
subtracted from the obtained value, and any payment above the obtained value
is infeasible (utility ``-inf``).

Indices are 0-based everywhere: bidder ``i`` is ``instance.values[i]`` and
slot ``j`` has click-through rate ``instance.ctrs[j]``. The dummy slot is
``DUMMY`` (-1) and has CTR 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import permutations, combinations
from typing import Any, Sequence

import numpy as np

TOL = 1e-9
INF = math.inf
DUMMY = -1


def leq(a: float, b: float, tol: float = TOL) -> bool:
    """``a <= b`` up to a mixed absolute/relative tolerance."""
    return a <= b + tol * max(1.0, abs(b))


class ValidationError(ValueError):
    """Raised when an instance or configuration breaks a model invariant."""

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True)
class Bidder:
    value: float
    allowance: float = 0.0


def _frozen(a, dtype=float) -> np.ndarray:
    arr = np.array(a, dtype=dtype, copy=True).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class AuctionInstance:
    """True types, reported bids and the slot CTR profile.

    ``allowances`` uses ``math.inf`` for value maximizers. The arrays are
    read-only; use :meth:`with_bid` / :meth:`with_bids` to derive variants.
    """

    values: np.ndarray
    allowances: np.ndarray
    bids: np.ndarray
    ctrs: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values))
        object.__setattr__(self, "allowances", _frozen(self.allowances))
        object.__setattr__(self, "bids", _frozen(self.bids))
        object.__setattr__(self, "ctrs", _frozen(self.ctrs))

    @classmethod
    def create(cls, values, ctrs, allowances=None, bids=None, metadata=None,
               validate: bool = True) -> "AuctionInstance":
        values = np.asarray(values, dtype=float)
        if allowances is None:
            allowances = np.zeros_like(values)
        if bids is None:
            bids = values
        inst = cls(values, allowances, bids, ctrs, dict(metadata or {}))
        if validate:
            problems = validate_instance(inst)
            if problems:
                raise ValidationError(problems)
        return inst

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def k(self) -> int:
        return len(self.ctrs)

    def bidder(self, i: int) -> Bidder:
        return Bidder(float(self.values[i]), float(self.allowances[i]))

    def with_bid(self, i: int, bid: float) -> "AuctionInstance":
        bids = self.bids.copy()
        bids[i] = bid
        return AuctionInstance(self.values, self.allowances, bids, self.ctrs, self.metadata)

    def with_bids(self, bids) -> "AuctionInstance":
        return AuctionInstance(self.values, self.allowances, bids, self.ctrs, self.metadata)

    def with_allowances(self, allowances) -> "AuctionInstance":
        return AuctionInstance(self.values, allowances, self.bids, self.ctrs, self.metadata)

    def truthful(self) -> "AuctionInstance":
        return self.with_bids(self.values)

    def __eq__(self, other):
        if not isinstance(other, AuctionInstance):
            return NotImplemented
        return (
            np.array_equal(self.values, other.values)
            and np.array_equal(self.allowances, other.allowances)
            and np.array_equal(self.bids, other.bids)
            and np.array_equal(self.ctrs, other.ctrs)
        )

    __hash__ = None


def validate_instance(instance: AuctionInstance) -> list[str]:
    """Return the list of violated invariants (empty when valid)."""
    out = []
    v, g, b, a = instance.values, instance.allowances, instance.bids, instance.ctrs
    if not (len(v) == len(g) == len(b)):
        out.append("values, allowances and bids differ in length")
    if instance.n < instance.k:
        out.append("n < k")
    if np.any(~np.isfinite(v)) or np.any(v <= 0):
        out.append("values must be finite and > 0")
    if np.any(np.isnan(g)) or np.any(g < 0):
        out.append("allowances must be >= 0")
    if np.any(~np.isfinite(b)) or np.any(b < 0):
        out.append("bids must be finite and >= 0")
    if np.any(~np.isfinite(a)) or np.any((a < 0) | (a > 1)):
        out.append("ctrs must lie in [0, 1]")
    if np.any(np.diff(a) > 0):
        out.append("ctrs not non-increasing")
    return out


@dataclass
class Outcome:
    """Slot per bidder (``DUMMY`` when unassigned) and payments.

    ``branch`` and ``partition`` are filled in by the randomized mechanisms so
    callers can inspect which realization produced the outcome.
    """

    assignment: np.ndarray
    payments: np.ndarray
    branch: str | None = None
    partition: Any = None
    prices: np.ndarray | None = None

    @classmethod
    def empty(cls, n: int) -> "Outcome":
        return cls(np.full(n, DUMMY, dtype=np.int64), np.zeros(n))

    def ctr_of(self, instance: AuctionInstance, i: int) -> float:
        j = int(self.assignment[i])
        return 0.0 if j == DUMMY else float(instance.ctrs[j])

    def check(self, k: int) -> None:
        taken = self.assignment[self.assignment != DUMMY]
        if len(taken) != len(set(taken.tolist())):
            raise ValidationError("a slot is assigned to more than one bidder")
        if np.any(taken >= k) or np.any(taken < DUMMY):
            raise ValidationError("slot index out of range")
        if np.any(self.payments[self.assignment == DUMMY] != 0):
            raise ValidationError("unassigned bidder pays")


def allowance_utility(value: float, allowance: float, ctr: float, payment: float) -> float:
    """Utility of receiving ``ctr`` at ``payment``; ``-inf`` if infeasible."""
    obtained = value * ctr
    if not leq(payment, obtained):
        return -INF
    return obtained - max(0.0, payment - allowance)


def social_welfare(instance: AuctionInstance, outcome: Outcome) -> float:
    if len(outcome.assignment) != instance.n:
        raise ValidationError("outcome size does not match bidder count")
    total = 0.0
    for i, j in enumerate(outcome.assignment):
        if j != DUMMY:
            total += instance.values[i] * instance.ctrs[j]
    return float(total)


@dataclass(frozen=True)
class WelfareReport:
    optimal_welfare: float
    optimal_assignment: Outcome
    achieved_welfare: float
    max_single_contribution: float
    rho_observed: float


def optimal_order(values: np.ndarray) -> np.ndarray:
    """Bidders by value descending, ties to the lower index."""
    return np.lexsort((np.arange(len(values)), -np.asarray(values)))


def optimal_welfare(instance: AuctionInstance, outcome: Outcome | None = None) -> WelfareReport:
    """Assortative optimum: i-th highest value takes the i-th slot."""
    order = optimal_order(instance.values)
    opt = Outcome.empty(instance.n)
    total = 0.0
    for j in range(instance.k):
        i = order[j]
        opt.assignment[i] = j
        total += instance.values[i] * instance.ctrs[j]
    single = float(instance.values.max() * instance.ctrs[0]) if instance.k else 0.0
    achieved = social_welfare(instance, outcome) if outcome is not None else 0.0
    rho = total / single if single > 0 else INF
    return WelfareReport(float(total), opt, achieved, single, float(rho))


def rho_observed(instance: AuctionInstance) -> float:
    return optimal_welfare(instance).rho_observed


def exhaustive_welfare(values: Sequence[float], ctrs: Sequence[float]) -> float:
    """Brute-force maximum over all one-to-one bidder/slot assignments.

    Sums are taken in slot order so the result is comparable bit-for-bit with
    :func:`optimal_welfare` on inputs whose products are exact.
    """
    n, k = len(values), len(ctrs)
    best = 0.0
    for chosen in combinations(range(n), k):
        for perm in permutations(chosen):
            total = 0.0
            for j, i in enumerate(perm):
                total += values[i] * ctrs[j]
            best = max(best, total)
    return best


@dataclass(frozen=True)
class RoundedBid:
    exponent: float  # int-valued, or -inf for a zero bid
    rounded: float


def round_bid(bid: float, epsilon: float) -> RoundedBid:
    """Round ``bid`` down to an integer power of ``1 + epsilon``."""
    if epsilon <= 0:
        raise ValidationError("epsilon must be > 0")
    if bid < 0:
        raise ValidationError("bid must be >= 0")
    if bid == 0:
        return RoundedBid(-INF, 0.0)
    base = 1.0 + epsilon
    t = math.floor(math.log(bid) / math.log(base))
    # the float log can be off by one either way near exact powers; the
    # bracket is checked with a purely relative tolerance so tiny bids work
    while base ** (t + 1) <= bid * (1 + TOL):
        t += 1
    while base ** t > bid * (1 + TOL):
        t -= 1
    return RoundedBid(t, base ** t)
