"""Random instance families.

All bids are truthful (bid = value) unless noted. Allowances come from an
even mixture of quasi-linear (0), a finite draw ``U[0, 2 v alpha_1]`` and
value maximizers (``inf``).
"""
from __future__ import annotations

import numpy as np

from .model import INF, AuctionInstance, rho_observed


class GenerationError(RuntimeError):
    pass


def mixed_allowances(values: np.ndarray, alpha1: float, rng: np.random.Generator) -> np.ndarray:
    kind = rng.integers(0, 3, size=len(values))
    finite = rng.uniform(0.0, 2.0 * values * alpha1)
    return np.where(kind == 0, 0.0, np.where(kind == 1, finite, INF))


def sorted_ctrs(k: int, rng: np.random.Generator, low: float = 0.0) -> np.ndarray:
    return np.sort(rng.uniform(low, 1.0, size=k))[::-1]


def random_instance(rng: np.random.Generator, n_max: int = 8, k_max: int = 4,
                    tie_prob: float = 0.25) -> AuctionInstance:
    """Small general instance; some values are duplicated to force ties."""
    k = int(rng.integers(1, k_max + 1))
    n = int(rng.integers(max(k, 2), max(n_max, k) + 1))
    values = rng.uniform(0.2, 5.0, size=n)
    for i in range(1, n):
        if rng.random() < tie_prob:
            values[i] = values[rng.integers(0, i)]
    ctrs = sorted_ctrs(k, rng)
    ctrs[0] = max(ctrs[0], 1e-3)
    return AuctionInstance.create(values, ctrs, mixed_allowances(values, ctrs[0], rng))


def single_slot_instance(rng: np.random.Generator, n_max: int = 8) -> AuctionInstance:
    n = int(rng.integers(1, n_max + 1))
    values = rng.uniform(0.2, 5.0, size=n)
    alpha = np.array([rng.uniform(0.1, 1.0)])
    return AuctionInstance.create(values, alpha, mixed_allowances(values, alpha[0], rng))


def tie_instance(rng: np.random.Generator, epsilon: float, n_max: int = 6) -> AuctionInstance:
    """Single slot where the top rounded bids share one exponent.

    Two or more bidders have values in ``[(1+eps)^t, (1+eps)^(t+1))`` for a
    common ``t``; the rest sit strictly lower.
    """
    base = 1.0 + epsilon
    n = int(rng.integers(2, n_max + 1))
    tied = int(rng.integers(2, n + 1))
    t = int(rng.integers(-2, 4))
    lo, hi = base ** t, base ** (t + 1)
    top = rng.uniform(lo, hi, size=tied)
    if rng.random() < 0.5:
        top[:] = top[0]
    rest = rng.uniform(0.05 * lo, lo / base, size=n - tied)
    values = np.concatenate([top, rest])
    rng.shuffle(values)
    alpha = np.array([1.0])
    return AuctionInstance.create(values, alpha, mixed_allowances(values, 1.0, rng))


def lemma2_instance() -> AuctionInstance:
    """Two equal bidders of value 1, allowance 1/2, one slot of CTR 1."""
    return AuctionInstance.create([1.0, 1.0], [1.0], [0.5, 0.5])


def generate_large_market_instance(n: int, k: int, rho_target: float,
                                   rng: np.random.Generator, ctr_low: float = 0.5,
                                   max_attempts: int = 50) -> AuctionInstance:
    """Values ``U[1,2]``, CTRs ``U[ctr_low, 1]`` sorted, redrawn until the
    observed large-market ratio OPT / (v_max alpha_1) reaches ``rho_target``.

    That ratio never exceeds ``k`` (OPT sums at most k terms, each at most
    ``v_max alpha_1``), so larger targets fail immediately.
    """
    if rho_target > k:
        raise GenerationError(
            f"rho_target={rho_target} is unreachable: OPT / (v_max * alpha_1) <= k = {k}")
    if n < k:
        raise GenerationError(f"n={n} < k={k}")
    best = 0.0
    for _ in range(max_attempts):
        values = rng.uniform(1.0, 2.0, size=n)
        ctrs = sorted_ctrs(k, rng, ctr_low)
        inst = AuctionInstance.create(values, ctrs, mixed_allowances(values, ctrs[0], rng))
        rho = rho_observed(inst)
        if rho >= rho_target:
            inst.metadata["rho_observed"] = rho
            return inst
        best = max(best, rho)
    raise GenerationError(
        f"no instance with rho_observed >= {rho_target} after {max_attempts} draws "
        f"(best {best:.3f}; n={n}, k={k}, ctr_low={ctr_low})")


def flat_market_instance(n: int, k: int, top: int, rng: np.random.Generator,
                         ctr: float = 0.75) -> AuctionInstance:
    """Equal CTRs and ``top >= k`` bidders tied at the maximum value 2.

    OPT equals ``k * 2 * ctr`` (exactly, for a dyadic ``ctr``), so the
    observed ratio is exactly ``k``, the largest any k-slot instance reaches.
    """
    if top < k or top > n:
        raise GenerationError("need k <= top <= n")
    values = np.concatenate([np.full(top, 2.0), rng.uniform(1.0, 2.0, size=n - top)])
    rng.shuffle(values)
    ctrs = np.full(k, ctr)
    return AuctionInstance.create(values, ctrs, mixed_allowances(values, ctr, rng))


def dominant_bidder_instance(n: int, k: int, rng: np.random.Generator,
                             scale: float = 50.0) -> AuctionInstance:
    """Small market: one bidder worth ``scale`` times the rest."""
    values = rng.uniform(1.0, 2.0, size=n)
    values[rng.integers(0, n)] *= scale
    ctrs = sorted_ctrs(k, rng, 0.3)
    return AuctionInstance.create(values, ctrs, mixed_allowances(values, ctrs[0], rng))


def mixed_instance(rng: np.random.Generator) -> AuctionInstance:
    """One draw from a mixture of small, dominant-bidder and wide markets."""
    family = int(rng.integers(0, 3))
    if family == 0:
        return random_instance(rng)
    if family == 1:
        return dominant_bidder_instance(int(rng.integers(5, 30)), int(rng.integers(1, 5)), rng)
    n = int(rng.integers(50, 400))
    k = int(rng.integers(2, 8))
    values = rng.uniform(1.0, 2.0, size=n)
    ctrs = sorted_ctrs(k, rng, 0.3)
    return AuctionInstance.create(values, ctrs, mixed_allowances(values, ctrs[0], rng))


_FAMILIES = {
    "random": (lambda rng, n_max=8, k_max=4, tie_prob=0.25:
               random_instance(rng, int(n_max), int(k_max), float(tie_prob))),
    "single": lambda rng, n_max=8: single_slot_instance(rng, int(n_max)),
    "tie": lambda rng, eps=1.0, n_max=6: tie_instance(rng, float(eps), int(n_max)),
    "large": (lambda rng, n=400, k=10, rho=4.0, ctr_low=0.5, attempts=50:
              generate_large_market_instance(int(n), int(k), float(rho), rng,
                                             float(ctr_low), int(attempts))),
    "flat": (lambda rng, n=200, k=36, top=36, ctr=0.75:
             flat_market_instance(int(n), int(k), int(top), rng, float(ctr))),
    "dominant": (lambda rng, n=20, k=4, scale=50.0:
                 dominant_bidder_instance(int(n), int(k), rng, float(scale))),
    "mixed": lambda rng: mixed_instance(rng),
    "lemma2": lambda rng: lemma2_instance(),
}


def parse_generator_spec(spec: str):
    """``"family:key=val,..."`` to a callable ``rng -> AuctionInstance``.

    Families: random, single, tie, large, flat, dominant, mixed, lemma2.
    """
    name, _, rest = spec.partition(":")
    name = name.strip()
    if name not in _FAMILIES:
        raise GenerationError(f"unknown generator {name!r}; choose from {sorted(_FAMILIES)}")
    kwargs = {}
    for item in filter(None, (p.strip() for p in rest.split(","))):
        key, eq, val = item.partition("=")
        if not eq:
            raise GenerationError(f"generator option {item!r} is not key=value")
        kwargs[key.strip()] = val.strip()
    fn = _FAMILIES[name]

    def make(rng: np.random.Generator) -> AuctionInstance:
        try:
            return fn(rng, **kwargs)
        except TypeError as exc:
            raise GenerationError(f"bad options for generator {name!r}: {exc}") from exc

    make.spec = spec
    return make
